#pragma once

// Seeded samplers for points on simple manifolds, optionally with a density
// gap between clusters and bounded ambient noise.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "awc/dataset.hpp"
#include "awc/rng.hpp"

namespace awc {

struct ManifoldSpec {
  enum class Kind { circle, sphere2, segment };

  Kind kind = Kind::circle;
  double size = 1.0;          // radius for circle / sphere2, length for segment
  std::size_t ambient_dim = 2;

  static ManifoldSpec circle(double radius, std::size_t dim = 2) { return {Kind::circle, radius, dim}; }
  static ManifoldSpec sphere2(double radius, std::size_t dim = 3) { return {Kind::sphere2, radius, dim}; }
  static ManifoldSpec segment(double length, std::size_t dim = 1) { return {Kind::segment, length, dim}; }

  std::size_t intrinsic_dim() const {
    switch (kind) {
      case Kind::circle: return 1;
      case Kind::sphere2: return 2;
      case Kind::segment: return 1;
    }
    return 1;
  }

  void validate() const {
    if (!(size > 0.0)) throw std::invalid_argument("ManifoldSpec: radius/length must be positive");
    const std::size_t min_dim = kind == Kind::segment ? 1 : intrinsic_dim() + 1;
    if (ambient_dim < min_dim) throw std::invalid_argument("ManifoldSpec: ambient dimension too small");
  }
};

/// Open arc of the unit circle, angles in radians with begin < end.
struct Arc {
  double begin;
  double end;

  bool contains(double angle) const {
    // Bring the angle into [begin, begin + 2π).
    constexpr double tau = 2.0 * std::numbers::pi;
    double a = angle;
    while (a < begin) a += tau;
    while (a >= begin + tau) a -= tau;
    return a > begin && a < end;
  }
  double length() const { return end - begin; }
};

/// Density f0 on the cluster arcs and (1 - ε) f0 on the rest of the circle.
struct GapDensitySpec {
  std::vector<Arc> clusters;
  double gap_depth = 1.0;  // ε
  double base_level = 1.0; // f0

  void validate() const {
    if (!(gap_depth >= 0.0 && gap_depth <= 1.0)) throw std::invalid_argument("GapDensitySpec: gap depth must lie in [0, 1]");
    if (!(base_level > 0.0)) throw std::invalid_argument("GapDensitySpec: base level must be positive");
    double total = 0.0;
    for (const auto& c : clusters) {
      if (!(c.end > c.begin)) throw std::invalid_argument("GapDensitySpec: arc must have begin < end");
      total += c.length();
    }
    if (total > 2.0 * std::numbers::pi) throw std::invalid_argument("GapDensitySpec: arcs overlap");
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b)
        if (clusters[a].contains(clusters[b].begin + 1e-15) || clusters[b].contains(clusters[a].begin + 1e-15))
          throw std::invalid_argument("GapDensitySpec: arcs overlap");
  }

  double cluster_length() const {
    double total = 0.0;
    for (const auto& c : clusters) total += c.length();
    return total;
  }

  /// Probability that a uniform proposal is accepted.
  double acceptance_rate() const {
    constexpr double tau = 2.0 * std::numbers::pi;
    const double inside = cluster_length();
    return (inside + (1.0 - gap_depth) * (tau - inside)) / tau;
  }
};

/// Two clusters {y > 1/4} and {y < -1/4} on the unit circle, gap depth ε.
inline GapDensitySpec circle_gap_spec(double eps) {
  const double a = std::asin(0.25);
  const double pi = std::numbers::pi;
  return {{{a, pi - a}, {pi + a, 2.0 * pi - a}}, eps, 1.0};
}

struct SamplerStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

/// Rejection sampling on the unit circle from a gap density; labels are
/// 1 + cluster index, kGapLabel off the clusters.
inline Dataset sample_on_circle(const GapDensitySpec& spec, std::size_t n, std::uint64_t seed,
                                std::uint64_t stream = 0, SamplerStats* stats = nullptr) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample_on_circle: n must be >= 1");
  if (spec.gap_depth == 1.0 && spec.clusters.empty())
    throw std::invalid_argument("sample_on_circle: density is identically zero");
  SplitMix64 rng(seed, stream);
  Dataset out;
  out.dim = 2;
  out.coords.reserve(2 * n);
  out.labels.reserve(n);
  SamplerStats local;
  while (out.labels.size() < n) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    ++local.proposals;
    int label = kGapLabel;
    for (std::size_t c = 0; c < spec.clusters.size(); ++c)
      if (spec.clusters[c].contains(angle)) {
        label = static_cast<int>(c) + 1;
        break;
      }
    // The envelope is f0 everywhere, so the gap keeps a proposal with
    // probability 1 - ε. The uniform draw is consumed either way.
    const double u = rng.uniform();
    if (label == kGapLabel && !(u < 1.0 - spec.gap_depth)) continue;
    ++local.accepted;
    out.coords.push_back(std::cos(angle));
    out.coords.push_back(std::sin(angle));
    out.labels.push_back(label);
  }
  if (stats) *stats = local;
  return out;
}

inline Dataset sample_circle_gap(std::size_t n, double eps, std::uint64_t seed, std::uint64_t stream = 0) {
  return sample_on_circle(circle_gap_spec(eps), n, seed, stream);
}

/// Uniform samples on a circle, 2-sphere or segment embedded isometrically in
/// the leading coordinates of R^D.
inline Dataset sample_uniform_manifold(const ManifoldSpec& spec, std::size_t n, std::uint64_t seed,
                                       std::uint64_t stream = 0) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample_uniform_manifold: n must be >= 1");
  SplitMix64 rng(seed, stream);
  Dataset out;
  out.dim = spec.ambient_dim;
  out.coords.assign(n * spec.ambient_dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = out.point(i);
    switch (spec.kind) {
      case ManifoldSpec::Kind::circle: {
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        p[0] = spec.size * std::cos(angle);
        p[1] = spec.size * std::sin(angle);
        break;
      }
      case ManifoldSpec::Kind::sphere2: {
        double x, y, z, norm;
        do {
          x = rng.normal();
          y = rng.normal();
          z = rng.normal();
          norm = std::sqrt(x * x + y * y + z * z);
        } while (norm == 0.0);
        p[0] = spec.size * x / norm;
        p[1] = spec.size * y / norm;
        p[2] = spec.size * z / norm;
        break;
      }
      case ManifoldSpec::Kind::segment:
        p[0] = spec.size * rng.uniform();
        break;
    }
  }
  return out;
}

/// Displaces every point by an independent draw from the uniform distribution
/// on the ball of radius r_xi. Labels are kept.
inline Dataset add_bounded_noise(Dataset data, double r_xi, std::uint64_t seed, std::uint64_t stream = 0) {
  if (!(r_xi >= 0.0)) throw std::invalid_argument("add_bounded_noise: r_xi must be >= 0");
  if (r_xi == 0.0) return data;
  SplitMix64 rng(seed, stream);
  const std::size_t dim = data.dim;
  std::vector<double> dir(dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : dir) {
        v = rng.normal();
        norm += v * v;
      }
      norm = std::sqrt(norm);
    } while (norm == 0.0);
    const double radius = r_xi * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
    auto p = data.point(i);
    for (std::size_t k = 0; k < dim; ++k) p[k] += radius * dir[k] / norm;
  }
  return data;
}

}  // namespace awc
