#pragma once

// Evaluation metrics and independent checks: the local Rand index, closed-form
// lens ratios, Monte-Carlo gap coefficients and seeded theorem trials.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "awc/core.hpp"
#include "awc/datagen.hpp"
#include "awc/dataset.hpp"
#include "awc/rng.hpp"
#include "awc/spatial.hpp"
#include "awc/weights.hpp"

namespace awc {

struct PairClassification {
  Index i = 0;
  Index j = 0;
  bool same_cluster = false;
  bool predicted = false;
  double dist = 0.0;
};

/// Pairs i < j of cluster members (gap label excluded) with 0 < dist < h.
inline std::vector<PairClassification> eligible_pairs(const WeightMatrix& w, const Dataset& data, double h) {
  if (!data.has_labels()) throw std::invalid_argument("eligible_pairs: dataset has no labels");
  if (w.size() != data.size()) throw std::invalid_argument("eligible_pairs: matrix size mismatch");
  std::vector<PairClassification> out;
  const auto nbrs = neighbors_within(data, h);
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    if (data.labels[i] == kGapLabel) continue;
    for (Index j : nbrs[i]) {
      if (j <= i || data.labels[j] == kGapLabel) continue;
      const double dist = distance(data, i, j);
      if (!(dist > 0.0 && dist < h)) continue;
      out.push_back({static_cast<Index>(i), j, data.labels[i] == data.labels[j], w.connected(i, j), dist});
    }
  }
  return out;
}

struct RandCounts {
  std::size_t eligible = 0;
  std::size_t correct = 0;
};

inline RandCounts rand_counts(const WeightMatrix& w, const Dataset& data, double h) {
  RandCounts rc;
  for (const auto& p : eligible_pairs(w, data, h)) {
    ++rc.eligible;
    if (p.same_cluster == p.predicted) ++rc.correct;
  }
  if (rc.eligible == 0) throw std::invalid_argument("local Rand index: no eligible pair within radius");
  return rc;
}

/// Share of eligible pairs whose weight matches the ground truth.
inline double local_rand_index(const WeightMatrix& w, const Dataset& data, double h_eval = 1.0) {
  const auto rc = rand_counts(w, data, h_eval);
  return static_cast<double>(rc.correct) / static_cast<double>(rc.eligible);
}

inline double misclassification_rate(const WeightMatrix& w, const Dataset& data, double h_eval = 1.0) {
  const auto rc = rand_counts(w, data, h_eval);
  return static_cast<double>(rc.eligible - rc.correct) / static_cast<double>(rc.eligible);
}

/// Intersection-over-union of two unit balls at distance s, elementary
/// geometry for d = 1, 2, 3.
inline double lens_ratio_closed_form(int d, double s) {
  if (!(s >= 0.0 && s < 2.0)) throw std::domain_error("lens_ratio_closed_form: s must lie in [0, 2)");
  const double pi = std::numbers::pi;
  switch (d) {
    case 1:
      return (2.0 - s) / (2.0 + s);
    case 2: {
      const double lens = 2.0 * std::acos(0.5 * s) - 0.5 * s * std::sqrt(4.0 - s * s);
      return lens / (2.0 * pi - lens);
    }
    case 3: {
      const double lens = pi / 12.0 * (2.0 - s) * (2.0 - s) * (4.0 + s);
      return lens / (8.0 * pi / 3.0 - lens);
    }
    default:
      throw std::domain_error("lens_ratio_closed_form: d must be 1, 2 or 3");
  }
}

struct GapCoefficientEstimate {
  double q_hat = 0.0;
  double std_err = 0.0;
  double z_hat = 0.0;  // P(union)
  std::uint64_t n_mc = 0;
  std::uint64_t union_count = 0;
  std::uint64_t intersection_count = 0;
  bool degenerate = false;  // fewer than 30 samples in the union
};

/// Monte-Carlo gap coefficient P(B1 ∩ B2) / P(B1 ∪ B2) under a sampler.
/// `gen(rng, out)` writes one draw into `out`.
template <class Generator>
GapCoefficientEstimate mc_gap_coefficient(Generator&& gen, std::span<const double> m1, std::span<const double> m2,
                                          double r, std::uint64_t n_mc, std::uint64_t seed,
                                          std::uint64_t stream = 0) {
  if (m1.size() != m2.size() || m1.empty()) throw std::invalid_argument("mc_gap_coefficient: centre dimensions differ");
  if (!(r > 0.0)) throw std::domain_error("mc_gap_coefficient: r must be positive");
  if (n_mc < 1000) throw std::domain_error("mc_gap_coefficient: n_mc must be >= 1000");
  SplitMix64 rng(seed, stream);
  std::vector<double> x(m1.size());
  GapCoefficientEstimate est;
  est.n_mc = n_mc;
  for (std::uint64_t s = 0; s < n_mc; ++s) {
    gen(rng, std::span<double>(x));
    const bool in1 = distance(x, m1) <= r;
    const bool in2 = distance(x, m2) <= r;
    est.union_count += (in1 || in2);
    est.intersection_count += (in1 && in2);
  }
  est.z_hat = static_cast<double>(est.union_count) / static_cast<double>(n_mc);
  est.degenerate = est.union_count < 30;
  if (est.union_count > 0) {
    const double u = static_cast<double>(est.union_count);
    est.q_hat = static_cast<double>(est.intersection_count) / u;
    est.std_err = std::sqrt(est.q_hat * (1.0 - est.q_hat) / u);
  }
  return est;
}

/// Per-sample KL divergence between the uniform density on G ∪ V and the
/// alternative whose density on G is lowered by the factor (1 - δ).
inline double kl_null_vs_gap(double vol_gap, double vol_rest, double delta) {
  if (!(vol_gap > 0.0 && vol_rest > 0.0)) throw std::domain_error("kl_null_vs_gap: volumes must be positive");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::domain_error("kl_null_vs_gap: delta must lie in [0, 1)");
  const double g = vol_gap / (vol_gap + vol_rest);
  return std::log1p(-delta * g) - g * std::log1p(-delta);
}

// ---------------------------------------------------------------------------
// Seeded trials on the unit circle, with the coefficient adjusted for d = 1
// only (reach and noise taken as zero).

inline GeometryParams circle_params() { return GeometryParams{1, 0.0, 0.0, 1.5}; }

/// h_k = 2^(k/2 - 2) for k = 0..4, computed exactly, so h_4 = 1.
inline BandwidthSchedule circle_schedule() {
  BandwidthSchedule s;
  for (int k = 0; k <= 4; ++k) s.radii.push_back(std::exp2(0.5 * k - 2.0));
  return s;
}

struct PropagationOutcome {
  bool fully_connected = false;      // every pair within h_K linked at the end
  std::size_t rejected_pairs = 0;    // rejections summed over all steps
};

inline PropagationOutcome propagation_outcome(std::size_t n, const BandwidthSchedule& schedule, double lambda,
                                              std::uint64_t seed, const AwcOptions& opts = {}) {
  const Dataset data = sample_uniform_manifold(ManifoldSpec::circle(1.0), n, seed);
  const auto res = awc_run(data, schedule, lambda, circle_params(), opts);
  PropagationOutcome out;
  for (const auto& s : res.steps) out.rejected_pairs += s.rejected();
  out.fully_connected = res.steps.back().rejected() == 0;
  return out;
}

/// True when the final weights connect all pairs within h_K.
inline bool propagation_trial(std::size_t n, const BandwidthSchedule& schedule, double lambda, std::uint64_t seed,
                              const AwcOptions& opts = {}) {
  return propagation_outcome(n, schedule, lambda, seed, opts).fully_connected;
}

struct SeparationOutcome {
  bool separated = false;            // every eligible cross-cluster pair has weight 0
  std::size_t cross_pairs = 0;
  double rand_index = 0.0;
};

inline SeparationOutcome separation_outcome(std::size_t n, double eps, const BandwidthSchedule& schedule,
                                            double lambda, std::uint64_t seed, const AwcOptions& opts = {}) {
  const Dataset data = sample_circle_gap(n, eps, seed);
  const auto res = awc_run(data, schedule, lambda, circle_params(), opts);
  SeparationOutcome out;
  out.separated = true;
  RandCounts rc;
  for (const auto& p : eligible_pairs(res.weights, data, schedule.final_radius())) {
    ++rc.eligible;
    if (p.same_cluster == p.predicted) ++rc.correct;
    if (!p.same_cluster) {
      ++out.cross_pairs;
      if (p.predicted) out.separated = false;
    }
  }
  out.rand_index = rc.eligible ? static_cast<double>(rc.correct) / static_cast<double>(rc.eligible) : 0.0;
  return out;
}

inline bool separation_trial(std::size_t n, double eps, const BandwidthSchedule& schedule, double lambda,
                             std::uint64_t seed, const AwcOptions& opts = {}) {
  return separation_outcome(n, eps, schedule, lambda, seed, opts).separated;
}

}  // namespace awc
