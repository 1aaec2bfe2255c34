#pragma once

// Numerical self-checks of the special functions and divergences, grouped in
// named families. Each family scans a fixed grid and counts failures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "awc/core.hpp"
#include "awc/eval.hpp"
#include "awc/special_functions.hpp"

namespace awc {

struct CheckResult {
  std::string name;
  std::size_t points = 0;
  std::size_t failures = 0;
  double worst = 0.0;     // largest error (or violation margin) seen
  double tolerance = 0.0;
  std::string first_failure;

  bool passed() const { return failures == 0; }
};

/// Test hook: the coefficient under check is volume_coefficient scaled by
/// (1 + q_perturbation). Zero in normal use.
struct ValidationOptions {
  double q_perturbation = 0.0;
  PrecisionConfig precision{};
};

namespace detail {

class CheckTally {
 public:
  CheckTally(std::string name, double tol) {
    r_.name = std::move(name);
    r_.tolerance = tol;
  }

  // Records one point; `err` is compared against the tolerance.
  void point(double err, const std::string& where) {
    ++r_.points;
    if (std::isnan(err) || err > r_.tolerance) {
      if (r_.failures++ == 0) r_.first_failure = where;
    }
    if (!(err <= r_.worst)) r_.worst = err;
  }

  CheckResult result() const { return r_; }

 private:
  CheckResult r_;
};

inline std::string at(const char* what, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(%g, %g)", what, a, b);
  return buf;
}

}  // namespace detail

using CoefficientFn = std::function<double(int, double)>;

inline CoefficientFn checked_coefficient(const ValidationOptions& opts) {
  return [opts](int d, double s) {
    return (1.0 + opts.q_perturbation) * VolumeCoefficient(d, opts.precision)(s);
  };
}

/// q_d(s) against the interval, lens and cap closed forms, d = 1, 2, 3.
inline CheckResult check_closed_forms(const CoefficientFn& q) {
  detail::CheckTally t("closed-form agreement", 1e-9);
  for (int d = 1; d <= 3; ++d)
    for (int k = 1; k <= 39; ++k) {
      const double s = 0.05 * k;
      t.point(std::abs(q(d, s) - lens_ratio_closed_form(d, s)), detail::at("q", d, s));
    }
  return t.result();
}

/// lower(d, s) <= q_d(s) <= upper(d, s) for d = 1..20, s = 0.1..1.9.
inline CheckResult check_volume_bounds(const CoefficientFn& q) {
  detail::CheckTally t("exponential bounds", 0.0);
  for (int d = 1; d <= 20; ++d)
    for (int k = 1; k <= 19; ++k) {
      const double s = 0.1 * k;
      const auto b = volume_coefficient_bounds(d, s);
      const double v = q(d, s);
      t.point(std::max({b.lower - v, v - b.upper, 0.0}), detail::at("bounds", d, s));
    }
  return t.result();
}

/// Analytic derivative against central differences of q, relative error.
inline CheckResult check_derivative(const CoefficientFn& q, const PrecisionConfig& cfg) {
  detail::CheckTally t("derivative vs finite differences", 1e-6);
  constexpr double h = 1e-6;
  for (int d : {1, 2, 3, 5, 10}) {
    const VolumeCoefficient exact(d, cfg);
    for (int k = 1; k <= 38; ++k) {
      const double x = 0.05 * k;
      const double fd = (q(d, x + h) - q(d, x - h)) / (2.0 * h);
      const double an = exact.derivative(x);
      t.point(std::abs(fd - an) / std::abs(an), detail::at("dq", d, x));
    }
  }
  return t.result();
}

/// Continued fraction against the power series, b = 1/2.
inline CheckResult check_incomplete_beta(const PrecisionConfig& cfg) {
  detail::CheckTally t("incomplete beta series", 1e-10);
  for (double a : {0.5, 1.0, 1.5, 5.0, 10.5})
    for (int k = 1; k <= 9; ++k) {
      const double x = 0.1 * k;
      const double cf = incomplete_beta(x, a, 0.5, cfg);
      const double series = incomplete_beta_series(x, a, 0.5, cfg);
      t.point(std::abs(cf - series) / series, detail::at("B", x, a));
    }
  return t.result();
}

/// K(α, β) >= 2 (α - β)² on a 100 x 99 grid.
inline CheckResult check_pinsker() {
  detail::CheckTally t("Pinsker inequality", 0.0);
  for (int i = 0; i < 100; ++i)
    for (int j = 1; j <= 99; ++j) {
      const double alpha = i / 99.0;
      const double beta = j / 100.0;
      const double gap = 2.0 * (alpha - beta) * (alpha - beta) - kl_bernoulli(alpha, beta);
      // Equality at α = β; allow rounding there.
      t.point(std::max(gap - 1e-15, 0.0), detail::at("K", alpha, beta));
    }
  return t.result();
}

/// kl_null_vs_gap strictly increasing in δ on [0, 0.99].
inline CheckResult check_kl_monotone() {
  detail::CheckTally t("null-vs-gap KL monotone", 0.0);
  for (double g : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    double prev = kl_null_vs_gap(g, 1.0 - g, 0.0);
    for (int k = 1; k <= 99; ++k) {
      const double delta = 0.01 * k;
      const double v = kl_null_vs_gap(g, 1.0 - g, delta);
      t.point(v > prev ? 0.0 : prev - v + 1.0, detail::at("KL", g, delta));
      prev = v;
    }
  }
  return t.result();
}

/// q_d strictly decreasing in s (spacing 0.01) and in d.
inline CheckResult check_coefficient_monotone(const CoefficientFn& q) {
  detail::CheckTally t("coefficient monotonicity", 0.0);
  for (int d = 1; d <= 20; ++d) {
    double prev = q(d, 0.0);
    for (int k = 1; k <= 199; ++k) {
      const double s = 0.01 * k;
      const double v = q(d, s);
      t.point(v < prev ? 0.0 : v - prev + 1.0, detail::at("q(s)", d, s));
      if (d < 20) {
        const double next_d = q(d + 1, s);
        t.point(next_d < v ? 0.0 : next_d - v + 1.0, detail::at("q(d)", d, s));
      }
      prev = v;
    }
  }
  return t.result();
}

inline std::vector<CheckResult> run_validation(const ValidationOptions& opts = {}) {
  opts.precision.validate();
  const CoefficientFn q = checked_coefficient(opts);
  return {
      check_closed_forms(q),
      check_volume_bounds(q),
      check_derivative(q, opts.precision),
      check_coefficient_monotone(q),
      check_incomplete_beta(opts.precision),
      check_pinsker(),
      check_kl_monotone(),
  };
}

}  // namespace awc
