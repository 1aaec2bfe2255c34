#pragma once

// Curvature and noise corrections to the volume coefficient, plus a checker
// for the standing geometric assumptions on (d, κ, r_ξ, b').

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "awc/special_functions.hpp"

namespace awc {

struct GeometryParams {
  int d = 1;               // intrinsic dimension
  double kappa = 0.0;      // curvature bound, 1 / reach
  double r_xi = 0.0;       // noise radius bound
  double b_prime = 1.5;    // cap on the schedule ratio

  void validate() const {
    if (d < 1) throw std::invalid_argument("GeometryParams: d must be >= 1");
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
      throw std::invalid_argument("GeometryParams: kappa must be finite and >= 0");
    if (!(r_xi >= 0.0) || !std::isfinite(r_xi))
      throw std::invalid_argument("GeometryParams: r_xi must be finite and >= 0");
    if (!(b_prime > 1.0 && b_prime < 2.0))
      throw std::invalid_argument("GeometryParams: b_prime must lie in (1, 2)");
  }

  friend bool operator==(const GeometryParams&, const GeometryParams&) = default;
};

struct Violation {
  std::string name;    // "noise bound", "reach bound", "ratio bound"
  std::string detail;  // offending values
};

struct AssumptionReport {
  bool ok = true;
  std::vector<Violation> violations;
  // Radius at which the ratio bound on b was evaluated.
  double ratio_bound_radius = 0.0;
  double eps_manifold = 0.0;
  double eps_noise = 0.0;
  // Informational: set when an ε factor exceeds 1, where the gap-coefficient
  // sandwich no longer carries useful information.
  bool large_correction = false;
};

namespace detail {

inline double correction_denominator(const GeometryParams& p) {
  const double half = 0.5 * p.b_prime;
  return std::pow(1.0 - half * half, 0.5 * (p.d + 1));
}

}  // namespace detail

/// ε_M = 84 κ (d+1) r / (1 - (b'/2)²)^((d+1)/2)
inline double eps_manifold(const GeometryParams& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("eps_manifold: r must be positive");
  return 84.0 * p.kappa * (p.d + 1) * r / detail::correction_denominator(p);
}

/// ε_ξ = 80 (d+1) (r_ξ / r) / (1 - (b'/2)²)^((d+1)/2)
inline double eps_noise(const GeometryParams& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("eps_noise: r must be positive");
  return 80.0 * (p.d + 1) * (p.r_xi / r) / detail::correction_denominator(p);
}

/// q_d(s) shrunk by (1 + ε_M)⁻¹ (1 + ε_ξ)⁻¹ at radius r.
inline double adjusted_coefficient(const GeometryParams& p, double r, double s,
                                   const PrecisionConfig& cfg = {}) {
  const double q = volume_coefficient(p.d, s, cfg);
  if (p.kappa == 0.0 && p.r_xi == 0.0) return q;
  return q / ((1.0 + eps_manifold(p, r)) * (1.0 + eps_noise(p, r)));
}

/// adjusted_coefficient at a fixed radius r, for many values of s.
class AdjustedCoefficient {
 public:
  AdjustedCoefficient(const GeometryParams& p, double r, const PrecisionConfig& cfg = {})
      : q_(p.d, cfg), exact_(p.kappa == 0.0 && p.r_xi == 0.0) {
    if (!exact_) shrink_ = (1.0 + eps_manifold(p, r)) * (1.0 + eps_noise(p, r));
  }

  double operator()(double s) const {
    const double q = q_(s);
    return exact_ ? q : q / shrink_;
  }

 private:
  VolumeCoefficient q_;
  bool exact_;
  double shrink_ = 1.0;
};

/// Checks r_ξ <= r0 / max{20, 5d}, r1 <= 1 / (max{48, 6d} κ) and
/// 1 < b <= b' / ((1 + 3κr)(1 + 5 r_ξ / r)) with r = r1.
inline AssumptionReport check_assumptions(const GeometryParams& p, double r0, double r1, double b) {
  if (!(r0 > 0.0 && r1 > 0.0)) throw std::domain_error("check_assumptions: radii must be positive");
  AssumptionReport rep;
  auto fail = [&](std::string name, std::string detail) {
    rep.violations.push_back({std::move(name), std::move(detail)});
  };

  const double noise_cap = r0 / std::max(20.0, 5.0 * p.d);
  if (p.r_xi > noise_cap)
    fail("noise bound", "r_xi=" + std::to_string(p.r_xi) + " > " + std::to_string(noise_cap));

  if (p.kappa > 0.0) {
    const double reach_cap = 1.0 / (std::max(48.0, 6.0 * p.d) * p.kappa);
    if (r1 > reach_cap)
      fail("reach bound", "r1=" + std::to_string(r1) + " > " + std::to_string(reach_cap));
  }

  rep.ratio_bound_radius = r1;
  const double ratio_cap = p.b_prime / ((1.0 + 3.0 * p.kappa * r1) * (1.0 + 5.0 * p.r_xi / r1));
  if (!(b > 1.0 && b <= ratio_cap))
    fail("ratio bound", "b=" + std::to_string(b) + " outside (1, " + std::to_string(ratio_cap) + "]");

  rep.eps_manifold = eps_manifold(p, r1);
  rep.eps_noise = eps_noise(p, r0);
  rep.large_correction = rep.eps_manifold > 1.0 || rep.eps_noise > 1.0;
  rep.ok = rep.violations.empty();
  return rep;
}

/// λ = (α / 4) ln n, the threshold balancing propagation and separation rates.
inline double suggest_lambda(long long n, double alpha) {
  if (n < 2) throw std::domain_error("suggest_lambda: n must be >= 2");
  if (!(alpha > 0.0)) throw std::domain_error("suggest_lambda: alpha must be positive");
  return 0.25 * alpha * std::log(static_cast<double>(n));
}

}  // namespace awc
