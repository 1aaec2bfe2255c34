#pragma once

// Repeated λ-searched runs on circle data with a density gap, summarized per
// (ε, n) cell, and least-squares trend fits for the summaries.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "awc/datagen.hpp"
#include "awc/lambda_search.hpp"
#include "awc/rng.hpp"

namespace awc::experiments {

struct SweepSpec {
  std::vector<double> eps;
  std::vector<std::size_t> n;
  std::vector<double> lambdas;
  std::size_t repeats = 100;
  std::uint64_t seed = 1;
  BandwidthSchedule schedule;
  GeometryParams geometry{1, 0.0, 0.0, 1.5};
  CoefficientRadius coefficient_radius = CoefficientRadius::previous;
  double h_eval = 1.0;
  double noise = 0.0;
  unsigned threads = 1;
};

struct TrialRecord {
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  std::size_t eligible_pairs = 0;  // 0: trial carries no information
  double best_rand = 0.0;
  double min_best_lambda = 0.0;
};

struct CellSummary {
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t informative = 0;  // trials with at least one eligible pair
  double mean_rand = std::numeric_limits<double>::quiet_NaN();
  double frac_perfect = std::numeric_limits<double>::quiet_NaN();
  double mean_min_lambda = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
  std::vector<TrialRecord> trials;  // by cell (ε major, then n), then repeat
  std::vector<CellSummary> cells;
};

/// Cell identity from its values, so a trial's data does not depend on which
/// other cells share the sweep.
inline std::uint64_t cell_key(double eps, std::size_t n) {
  return SplitMix64::mix(std::bit_cast<std::uint64_t>(eps)) ^ static_cast<std::uint64_t>(n);
}

/// 0, 0.25, ..., 40 and +∞.
inline std::vector<double> default_lambda_grid() { return lambda_grid(0.0, 0.25, 40.0); }

inline TrialRecord run_trial(const SweepSpec& spec, double eps, std::size_t n, std::size_t repeat) {
  TrialRecord t{eps, n, repeat, trial_seed(spec.seed, cell_key(eps, n), repeat)};
  Dataset data = sample_circle_gap(n, eps, t.seed);
  if (spec.noise > 0.0) data = add_bounded_noise(std::move(data), spec.noise, t.seed, 1);
  AwcOptions opts;
  opts.radius = spec.coefficient_radius;
  const WeightMatrix w0 = init_weights(data, spec.schedule.radii.front());
  t.eligible_pairs = eligible_pairs(w0, data, spec.h_eval).size();
  if (t.eligible_pairs == 0) return t;
  const auto res = sweep_lambda(data, spec.schedule, spec.geometry, spec.lambdas, spec.h_eval, opts);
  t.best_rand = res.best_rand_index;
  t.min_best_lambda = res.min_best_lambda;
  return t;
}

inline CellSummary summarize(const TrialRecord* first, std::size_t count) {
  CellSummary c{first->eps, first->n};
  double rand = 0.0, lambda = 0.0;
  std::size_t perfect = 0;
  for (std::size_t r = 0; r < count; ++r) {
    const auto& t = first[r];
    if (t.eligible_pairs == 0) continue;
    ++c.informative;
    rand += t.best_rand;
    lambda += t.min_best_lambda;
    perfect += t.best_rand == 1.0;
  }
  if (c.informative > 0) {
    const double m = static_cast<double>(c.informative);
    c.mean_rand = rand / m;
    c.frac_perfect = static_cast<double>(perfect) / m;
    c.mean_min_lambda = lambda / m;
  }
  return c;
}

/// Runs every (ε, n, repeat) trial on up to `threads` workers. Each trial
/// writes its own slot, so the result does not depend on scheduling.
inline SweepResult run_sweep(const SweepSpec& spec) {
  spec.schedule.validate();
  spec.geometry.validate();
  if (spec.eps.empty() || spec.n.empty()) throw std::invalid_argument("run_sweep: empty ε or n list");
  if (spec.lambdas.empty()) throw std::invalid_argument("run_sweep: empty λ grid");
  if (spec.repeats == 0) throw std::invalid_argument("run_sweep: repeats must be >= 1");

  const std::size_t cells = spec.eps.size() * spec.n.size();
  const std::size_t jobs = cells * spec.repeats;
  SweepResult out;
  out.trials.resize(jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t cell = job / spec.repeats;
      const std::size_t repeat = job % spec.repeats;
      try {
        out.trials[job] = run_trial(spec, spec.eps[cell / spec.n.size()], spec.n[cell % spec.n.size()], repeat);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs;
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, spec.threads), jobs));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t c = 0; c < cells; ++c) out.cells.push_back(summarize(&out.trials[c * spec.repeats], spec.repeats));
  return out;
}

// ---------------------------------------------------------------------------
// Trend fits

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rss = 0.0;
  double aic = 0.0;  // m ln(RSS / m) + 2 * 2 for m points
};

/// Ordinary least squares y ≈ intercept + slope x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("fit_line: need at least 3 paired points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - f.intercept - f.slope * x[k];
    f.rss += r * r;
  }
  // An exact fit has no finite AIC; clamp so comparisons stay ordered.
  f.aic = m * std::log(std::max(f.rss, 1e-300) / m) + 4.0;
  return f;
}

struct LambdaTrend {
  LineFit log_fit;     // λ against ln n
  LineFit linear_fit;  // λ against n
  bool logarithmic_preferred() const { return log_fit.slope > 0.0 && linear_fit.aic > log_fit.aic; }
};

inline LambdaTrend lambda_trend(const std::vector<std::size_t>& n, const std::vector<double>& mean_min_lambda) {
  std::vector<double> ln, lin;
  for (std::size_t v : n) {
    ln.push_back(std::log(static_cast<double>(v)));
    lin.push_back(static_cast<double>(v));
  }
  return {fit_line(ln, mean_min_lambda), fit_line(lin, mean_min_lambda)};
}

}  // namespace awc::experiments
