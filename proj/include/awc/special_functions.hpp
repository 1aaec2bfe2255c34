#pragma once

// Beta-family special functions and the ball intersection-over-union
// coefficient q_d(s) used by the gap test.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/special_functions/gamma.hpp>

namespace awc {

struct PrecisionConfig {
  double rel_tol = 1e-13;
  int max_iter = 1000;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
      throw std::invalid_argument("PrecisionConfig: rel_tol must lie in (0, 1e-6]");
    if (max_iter < 100)
      throw std::invalid_argument("PrecisionConfig: max_iter must be >= 100");
  }
};

namespace detail {

inline void require(bool cond, const char* what) {
  if (!cond) throw std::domain_error(what);
}

// Modified Lentz evaluation of the continued fraction for B(x, a, b);
// converges quickly for x < (a + 1) / (a + b + 2).
inline double beta_continued_fraction(double x, double a, double b,
                                      const PrecisionConfig& cfg) {
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= cfg.max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < cfg.rel_tol) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

// B(x, a, b) straight from the continued fraction, no reflection.
inline double incomplete_beta_direct(double x, double a, double b,
                                     const PrecisionConfig& cfg) {
  if (x <= 0.0) return 0.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - std::log(a);
  return std::exp(log_front) * beta_continued_fraction(x, a, b, cfg);
}

}  // namespace detail

/// ln Γ(x) for x > 0.
inline double log_gamma(double x) {
  detail::require(x > 0.0 && std::isfinite(x), "log_gamma: argument must be positive and finite");
  return boost::math::lgamma(x);
}

inline double log_beta(double a, double b) {
  detail::require(a > 0.0 && b > 0.0, "beta: arguments must be positive");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

/// Complete beta function Γ(a)Γ(b)/Γ(a+b), evaluated in log space.
inline double beta(double a, double b) { return std::exp(log_beta(a, b)); }

/// Non-regularized incomplete beta B(x, a, b) = ∫₀ˣ t^{a-1}(1-t)^{b-1} dt.
///
/// Uses the continued fraction, reflecting through
/// B(x, a, b) = B(a, b) - B(1 - x, b, a) once x passes a / (a + b).
inline double incomplete_beta(double x, double a, double b,
                              const PrecisionConfig& cfg = {}) {
  detail::require(x >= 0.0 && x <= 1.0, "incomplete_beta: x must lie in [0, 1]");
  detail::require(a > 0.0 && b > 0.0, "incomplete_beta: a and b must be positive");
  if (x == 0.0) return 0.0;
  const double full = beta(a, b);
  if (x == 1.0) return full;
  if (x > a / (a + b)) return full - detail::incomplete_beta_direct(1.0 - x, b, a, cfg);
  return detail::incomplete_beta_direct(x, a, b, cfg);
}

/// Power series x^a Σ (1-b)_n / (n! (a+n)) x^n. Slow near x = 1; kept as a
/// cross-check for the continued fraction, not for production use.
inline double incomplete_beta_series(double x, double a, double b,
                                     const PrecisionConfig& cfg = {}) {
  detail::require(x >= 0.0 && x < 1.0, "incomplete_beta_series: x must lie in [0, 1)");
  detail::require(a > 0.0 && b > 0.0, "incomplete_beta_series: a and b must be positive");
  if (x == 0.0) return 0.0;
  double coef = 1.0;  // Γ(1-b+n) / (Γ(1-b) n!)
  double xn = 1.0;
  double sum = 1.0 / a;
  for (int n = 1; n <= cfg.max_iter; ++n) {
    coef *= (n - b) / n;
    xn *= x;
    const double term = coef * xn / (a + n);
    sum += term;
    // Tail is bounded by |term| * x / (1 - x) since |coef| is non-increasing
    // for b <= 1; for b > 1 the terms alternate or vanish.
    if (std::abs(term) * x / (1.0 - x) <= cfg.rel_tol * std::abs(sum)) return std::pow(x, a) * sum;
  }
  throw std::runtime_error("incomplete beta series did not converge");
}

namespace detail {

// Shared pieces of q_d(s): the complete beta B((d+1)/2, 1/2), the incomplete
// part B(1 - s²/4, (d+1)/2, 1/2) and the denominator 2B - B(x). The
// reflection is applied on s²/4 directly so small s keeps full precision.
struct VolumeTerms {
  double full;
  double partial;
  double denom;
};

inline VolumeTerms volume_terms(int d, double full, double s, const PrecisionConfig& cfg) {
  const double a = 0.5 * (d + 1);
  const double b = 0.5;
  const double y = 0.25 * s * s;
  if (y < b / (a + b)) {
    const double tail = incomplete_beta_direct(y, b, a, cfg);  // B(a,b) - B(1-y, a, b)
    return {full, full - tail, full + tail};
  }
  const double partial = incomplete_beta_direct(1.0 - y, a, b, cfg);
  return {full, partial, 2.0 * full - partial};
}

}  // namespace detail

/// q_d(s) for a fixed dimension, with the complete beta evaluated once.
class VolumeCoefficient {
 public:
  explicit VolumeCoefficient(int d, PrecisionConfig cfg = {}) : d_(d), cfg_(cfg) {
    detail::require(d >= 1, "volume_coefficient: dimension must be >= 1");
    full_ = beta(0.5 * (d + 1), 0.5);
  }

  int dimension() const { return d_; }

  /// |B(x1, r) ∩ B(x2, r)| / |B(x1, r) ∪ B(x2, r)| for d-dimensional balls
  /// whose centres are s·r apart.
  double operator()(double s) const {
    detail::require(s >= 0.0 && s < 2.0, "volume_coefficient: s must lie in [0, 2)");
    if (s == 0.0) return 1.0;
    const auto t = detail::volume_terms(d_, full_, s, cfg_);
    return t.partial / t.denom;
  }

  /// dq_d/dt; non-positive on [0, 2).
  double derivative(double t) const {
    detail::require(t >= 0.0 && t < 2.0, "volume_coefficient_derivative: t must lie in [0, 2)");
    const auto terms = detail::volume_terms(d_, full_, t, cfg_);
    const double base = 1.0 - 0.25 * t * t;
    return -2.0 * std::pow(base, 0.5 * (d_ - 1)) * terms.full / (terms.denom * terms.denom);
  }

 private:
  int d_;
  PrecisionConfig cfg_;
  double full_;
};

/// Volume coefficient q_d(s), the Lebesgue intersection-over-union of two
/// d-dimensional balls of equal radius at normalized centre distance s.
inline double volume_coefficient(int d, double s, const PrecisionConfig& cfg = {}) {
  return VolumeCoefficient(d, cfg)(s);
}

inline double volume_coefficient_derivative(int d, double t, const PrecisionConfig& cfg = {}) {
  return VolumeCoefficient(d, cfg).derivative(t);
}

struct CoefficientBounds {
  double lower;
  double upper;
};

/// Exponential-decay sandwich lower <= q_d(s) <= upper, both scaled by
/// (1 - s²/4)^((d+1)/2).
inline CoefficientBounds volume_coefficient_bounds(int d, double s) {
  detail::require(d >= 1, "volume_coefficient_bounds: dimension must be >= 1");
  detail::require(s > 0.0 && s < 2.0, "volume_coefficient_bounds: s must lie in (0, 2)");
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double decay = std::pow(1.0 - 0.25 * s * s, 0.5 * (d + 1));
  const double root = std::sqrt(static_cast<double>(d + 1));
  return {decay / (2.0 * root * sqrt_pi), root * decay / (0.5 * s * s * sqrt_pi)};
}

}  // namespace awc
