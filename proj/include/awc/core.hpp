#pragma once

// Adaptive Weights Clustering: the multiscale weight-update loop driven by
// the likelihood-ratio test of no gap.
//
// A step at radius h_k tests every pair within h_k against the local
// clusters of the previous step. The work is split so that the expensive,
// weight-independent part (candidate pairs and their coefficients) lives in a
// StepPlan, and only the counting and thresholding depend on the previous
// matrix and on λ.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "awc/coefficients.hpp"
#include "awc/dataset.hpp"
#include "awc/spatial.hpp"
#include "awc/weights.hpp"

namespace awc {

// ---------------------------------------------------------------------------
// Bandwidth schedule

struct BandwidthSchedule {
  std::vector<double> radii;

  std::size_t steps() const { return radii.empty() ? 0 : radii.size() - 1; }
  double final_radius() const { return radii.back(); }

  void validate() const {
    if (radii.size() < 2) throw std::invalid_argument("BandwidthSchedule: need at least two radii");
    if (!(radii.front() > 0.0) || !std::isfinite(radii.front()))
      throw std::invalid_argument("BandwidthSchedule: radii must be positive and finite");
    for (std::size_t k = 1; k < radii.size(); ++k) {
      const double ratio = radii[k] / radii[k - 1];
      if (!(ratio > 1.0 && ratio < 2.0) || !std::isfinite(radii[k]))
        throw std::invalid_argument("BandwidthSchedule: consecutive ratios must lie in (1, 2)");
    }
  }

  friend bool operator==(const BandwidthSchedule&, const BandwidthSchedule&) = default;
};

/// h_k = h0 · b^k for k = 0..K.
inline BandwidthSchedule build_schedule(double h0, double b, int K) {
  if (!(h0 > 0.0)) throw std::domain_error("build_schedule: h0 must be positive");
  if (!(b > 1.0 && b < 2.0)) throw std::domain_error("build_schedule: b must lie in (1, 2)");
  if (K < 1) throw std::domain_error("build_schedule: K must be >= 1");
  BandwidthSchedule s;
  s.radii.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) s.radii.push_back(h0 * std::pow(b, k));
  return s;
}

// ---------------------------------------------------------------------------
// Test statistic pieces

/// Kullback-Leibler divergence between Bernoulli(alpha) and Bernoulli(beta).
inline double kl_bernoulli(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("kl_bernoulli: alpha must lie in [0, 1]");
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("kl_bernoulli: beta must lie in (0, 1)");
  if (alpha == 0.0) return -std::log1p(-beta);
  if (alpha == 1.0) return -std::log(beta);
  const double kl = alpha * std::log(alpha / beta) + (1.0 - alpha) * std::log((1.0 - alpha) / (1.0 - beta));
  return std::max(kl, 0.0);
}

/// Signed statistic N·K(θ̃, q): positive when θ̃ < q (evidence of a gap),
/// non-positive otherwise. q = 1 (coincident points) and q = 0 (underflow
/// in high dimension) are taken as limits.
inline double test_statistic(std::uint64_t N, double theta_hat, double q) {
  if (!(theta_hat >= 0.0 && theta_hat <= 1.0)) throw std::domain_error("test_statistic: theta_hat must lie in [0, 1]");
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("test_statistic: q must lie in [0, 1]");
  if (N == 0) return 0.0;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (q >= 1.0) return theta_hat < 1.0 ? inf : 0.0;
  if (q <= 0.0) return theta_hat > 0.0 ? -inf : 0.0;
  const double nk = static_cast<double>(N) * kl_bernoulli(theta_hat, q);
  if (nk == 0.0) return 0.0;
  return theta_hat < q ? nk : -nk;
}

struct GapCounts {
  std::uint32_t shared = 0;      // |(C_i ∩ C_j) \ {i, j}|
  std::uint32_t union_mass = 0;  // |(C_i ∪ C_j) \ {i, j}|
};

/// Intersection and union counts of two local clusters, excluding i and j.
inline GapCounts gap_counts(std::size_t i, std::size_t j, const WeightMatrix& w) {
  const auto a = w.neighbors(i);
  const auto b = w.neighbors(j);
  GapCounts c;
  std::size_t p = 0, r = 0;
  while (p < a.size() || r < b.size()) {
    Index x;
    bool both = false;
    if (r == b.size() || (p < a.size() && a[p] < b[r])) {
      x = a[p++];
    } else if (p == a.size() || b[r] < a[p]) {
      x = b[r++];
    } else {
      x = a[p++];
      ++r;
      both = true;
    }
    if (x == i || x == j) continue;
    ++c.union_mass;
    if (both) ++c.shared;
  }
  return c;
}

inline std::size_t empirical_union_mass(std::size_t i, std::size_t j, const WeightMatrix& w) {
  if (i == j) throw std::domain_error("empirical_union_mass: i and j must differ");
  return gap_counts(i, j, w).union_mass;
}

/// θ̃ = shared / N, or nullopt when the union is empty.
inline std::optional<double> gap_estimate(std::size_t i, std::size_t j, const WeightMatrix& w) {
  if (i == j) throw std::domain_error("gap_estimate: i and j must differ");
  const auto c = gap_counts(i, j, w);
  if (c.union_mass == 0) return std::nullopt;
  return static_cast<double>(c.shared) / c.union_mass;
}

// ---------------------------------------------------------------------------
// Options and diagnostics

/// Radius used for the coefficient of a pair tested at step k.
enum class CoefficientRadius {
  previous,  // s = dist / h_{k-1}, r = h_{k-1}: matches the local clusters being compared
  current,   // s = dist / h_k, r = h_k
};

struct AwcOptions {
  CoefficientRadius radius = CoefficientRadius::previous;
  unsigned threads = 1;
  PrecisionConfig precision{};
};

struct PairDiagnostic {
  Index i = 0;
  Index j = 0;
  double dist = 0.0;
  std::uint32_t N = 0;
  std::uint32_t shared = 0;
  double theta_hat = 0.0;
  double q = 0.0;
  double T = 0.0;
  bool accepted = false;

  friend bool operator==(const PairDiagnostic&, const PairDiagnostic&) = default;
};

struct StepDiagnostics {
  std::size_t step = 0;
  double h_prev = 0.0;
  double h = 0.0;
  std::vector<PairDiagnostic> pairs;  // sorted by (i, j), i < j

  std::size_t rejected() const {
    return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(),
                                                   [](const PairDiagnostic& p) { return !p.accepted; }));
  }

  friend bool operator==(const StepDiagnostics&, const StepDiagnostics&) = default;
};

namespace detail {

template <class Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count / 256 + 1));
  if (workers == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
}

// Answers gap_counts queries against a fixed matrix. Small problems use
// dense bit rows (popcount over AND / OR); large ones merge sorted lists.
class GapCounter {
 public:
  static constexpr std::size_t kDenseLimit = 1u << 14;

  explicit GapCounter(const WeightMatrix& w) : w_(w) {
    const std::size_t n = w.size();
    if (n > kDenseLimit) return;
    words_ = (n + 63) / 64;
    bits_.assign(n * words_, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t* row = bits_.data() + i * words_;
      for (Index j : w.neighbors(i)) row[j >> 6] |= std::uint64_t{1} << (j & 63);
    }
  }

  GapCounts operator()(std::size_t i, std::size_t j) const {
    if (words_ == 0) return gap_counts(i, j, w_);
    const std::uint64_t* a = bits_.data() + i * words_;
    const std::uint64_t* b = bits_.data() + j * words_;
    std::uint32_t shared = 0, uni = 0;
    for (std::size_t k = 0; k < words_; ++k) {
      shared += static_cast<std::uint32_t>(std::popcount(a[k] & b[k]));
      uni += static_cast<std::uint32_t>(std::popcount(a[k] | b[k]));
    }
    // i never lies in its own row; the union picks up i and j exactly when
    // they were linked.
    if ((a[j >> 6] >> (j & 63)) & 1u) uni -= 2;
    return {shared, uni};
  }

 private:
  const WeightMatrix& w_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Steps

/// Weight-independent part of a step: the pairs within h and their adjusted
/// coefficients.
struct StepPlan {
  std::size_t n = 0;
  double h_prev = 0.0;
  double h = 0.0;
  std::vector<PairDiagnostic> pairs;  // i, j, dist, q filled
};

inline StepPlan plan_step(const Dataset& data, double h_prev, double h, const GeometryParams& params,
                          const AwcOptions& opts = {}) {
  if (!(h_prev > 0.0 && h > h_prev && h < 2.0 * h_prev))
    throw std::domain_error("awc step: radii must satisfy 0 < h_prev < h < 2 h_prev");
  StepPlan plan;
  plan.n = data.size();
  plan.h_prev = h_prev;
  plan.h = h;
  const auto nbrs = neighbors_within(data, h);
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (Index j : nbrs[i])
      if (j > i) {
        PairDiagnostic p;
        p.i = static_cast<Index>(i);
        p.j = j;
        p.dist = distance(data, i, j);
        plan.pairs.push_back(p);
      }
  const double r = opts.radius == CoefficientRadius::previous ? h_prev : h;
  const AdjustedCoefficient coefficient(params, r, opts.precision);
  detail::parallel_chunks(plan.pairs.size(), opts.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      auto& p = plan.pairs[k];
      p.q = coefficient(p.dist / r);
    }
  });
  return plan;
}

namespace detail {

// N, shared count, θ̃ and T for one planned pair.
inline void score_pair(PairDiagnostic& p, const GapCounter& counter) {
  const GapCounts c = counter(p.i, p.j);
  p.N = c.union_mass;
  p.shared = c.shared;
  if (c.union_mass == 0) {
    // No evidence either way: no gap.
    p.theta_hat = p.q;
    p.T = 0.0;
  } else {
    p.theta_hat = static_cast<double>(c.shared) / c.union_mass;
    p.T = test_statistic(c.union_mass, p.theta_hat, p.q);
  }
}

inline double pair_statistic(const PairDiagnostic& planned, const GapCounter& counter) {
  PairDiagnostic p;
  p.i = planned.i;
  p.j = planned.j;
  p.q = planned.q;
  score_pair(p, counter);
  return p.T;
}

}  // namespace detail

/// Test statistics only, in plan order.
inline std::vector<double> compute_statistics(const StepPlan& plan, const WeightMatrix& prev, unsigned threads = 1) {
  if (prev.size() != plan.n) throw std::invalid_argument("compute_statistics: matrix size mismatch");
  std::vector<double> stats(plan.pairs.size());
  const detail::GapCounter counter(prev);
  detail::parallel_chunks(stats.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) stats[k] = detail::pair_statistic(plan.pairs[k], counter);
  });
  return stats;
}

/// Fills N, θ̃ and T for every planned pair against the previous matrix;
/// `accepted` is left for the threshold.
inline StepDiagnostics evaluate_step(const StepPlan& plan, const WeightMatrix& prev, std::size_t step,
                                     unsigned threads = 1) {
  if (prev.size() != plan.n) throw std::invalid_argument("evaluate_step: matrix size mismatch");
  StepDiagnostics diag;
  diag.step = step;
  diag.h_prev = plan.h_prev;
  diag.h = plan.h;
  diag.pairs = plan.pairs;
  const detail::GapCounter counter(prev);
  detail::parallel_chunks(diag.pairs.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) detail::score_pair(diag.pairs[k], counter);
  });
  return diag;
}

/// New weights w_ij = 1(T_ij <= λ) over the planned pairs, with T given in
/// plan order; pairs outside the plan get 0.
inline WeightMatrix threshold_weights(std::span<const PairDiagnostic> pairs, std::span<const double> stats,
                                      std::size_t n, double lambda) {
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (stats[k] <= lambda) {
      ++offsets[pairs[k].i + 1];
      ++offsets[pairs[k].j + 1];
    }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<Index> cols(offsets[n]);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  // Pairs are sorted by (i, j), so each row fills in increasing order.
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (stats[k] <= lambda) {
      cols[cursor[pairs[k].i]++] = pairs[k].j;
      cols[cursor[pairs[k].j]++] = pairs[k].i;
    }
  return WeightMatrix::adopt_csr(std::move(offsets), std::move(cols));
}

inline WeightMatrix threshold_weights(const StepDiagnostics& diag, std::size_t n, double lambda) {
  std::vector<double> stats(diag.pairs.size());
  for (std::size_t k = 0; k < stats.size(); ++k) stats[k] = diag.pairs[k].T;
  return threshold_weights(diag.pairs, stats, n, lambda);
}

inline void mark_decisions(StepDiagnostics& diag, double lambda) {
  for (auto& p : diag.pairs) p.accepted = p.T <= lambda;
}

/// w⁽⁰⁾_ij = 1(||X_i - X_j|| <= h0).
inline WeightMatrix init_weights(const Dataset& data, double h0) {
  return WeightMatrix::adopt(neighbors_within(data, h0));
}

struct StepResult {
  WeightMatrix weights;
  StepDiagnostics diagnostics;
};

inline StepResult awc_step(const Dataset& data, const WeightMatrix& prev, double h_prev, double h,
                           double lambda, const GeometryParams& params, const AwcOptions& opts = {},
                           std::size_t step = 1) {
  if (std::isnan(lambda)) throw std::domain_error("awc_step: lambda is NaN");
  const StepPlan plan = plan_step(data, h_prev, h, params, opts);
  StepDiagnostics diag = evaluate_step(plan, prev, step, opts.threads);
  mark_decisions(diag, lambda);
  WeightMatrix next = threshold_weights(diag, data.size(), lambda);
  return {std::move(next), std::move(diag)};
}

struct AwcResult {
  WeightMatrix weights;
  std::vector<StepDiagnostics> steps;
};

/// Full run: initialise at h_0, then one test-and-update step per radius.
inline AwcResult awc_run(const Dataset& data, const BandwidthSchedule& schedule, double lambda,
                         const GeometryParams& params, const AwcOptions& opts = {}) {
  data.validate();
  schedule.validate();
  params.validate();
  AwcResult res;
  res.weights = init_weights(data, schedule.radii.front());
  for (std::size_t k = 1; k < schedule.radii.size(); ++k) {
    auto step = awc_step(data, res.weights, schedule.radii[k - 1], schedule.radii[k], lambda, params, opts, k);
    res.weights = std::move(step.weights);
    res.steps.push_back(std::move(step.diagnostics));
  }
  return res;
}

}  // namespace awc
