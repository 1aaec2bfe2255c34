#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "awc/datagen.hpp"
#include "awc/rng.hpp"

using namespace awc;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(SplitMix64, ReferenceOutputs) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng(), 0x06C45D188009454FULL);
}

TEST(SplitMix64, StreamsDiffer) {
  SplitMix64 a(42, 0), b(42, 1), c(42, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_EQ(x, c());
}

TEST(SplitMix64, UniformInHalfOpenUnitInterval) {
  SplitMix64 rng(3);
  double sum = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}

TEST(SplitMix64, NormalMoments) {
  SplitMix64 rng(4);
  double s1 = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 4 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(TrialSeed, DistinctAndStable) {
  EXPECT_EQ(trial_seed(1, 2, 3), trial_seed(1, 2, 3));
  EXPECT_NE(trial_seed(1, 2, 3), trial_seed(1, 2, 4));
  EXPECT_NE(trial_seed(1, 2, 3), trial_seed(1, 3, 3));
  EXPECT_NE(trial_seed(1, 2, 3), trial_seed(2, 2, 3));
}

TEST(CircleGap, FullDepthLeavesGapEmpty) {
  const auto d = sample_circle_gap(20000, 1.0, 1);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GT(std::abs(d.point(i)[1]), 0.25);
    EXPECT_NE(d.labels[i], kGapLabel);
  }
}

TEST(CircleGap, ZeroDepthArcFraction) {
  const std::size_t n = 100000;
  const auto d = sample_circle_gap(n, 0.0, 2);
  std::size_t upper = 0;
  for (std::size_t i = 0; i < n; ++i) upper += d.point(i)[1] > 0.25;
  const double p = (pi - 2 * std::asin(0.25)) / (2 * pi);
  EXPECT_NEAR(p, 0.41956, 1e-5);
  const double se = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(upper) / n, p, 3 * se);
}

TEST(CircleGap, PointsOnCircleWithConsistentLabels) {
  const auto d = sample_circle_gap(5000, 0.5, 3);
  ASSERT_EQ(d.dim, 2u);
  ASSERT_EQ(d.labels.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = d.point(i)[0], y = d.point(i)[1];
    EXPECT_NEAR(x * x + y * y, 1.0, 1e-12);
    const int expected = y > 0.25 ? 1 : (y < -0.25 ? 2 : kGapLabel);
    EXPECT_EQ(d.labels[i], expected) << y;
  }
}

TEST(CircleGap, GapFractionMatchesDensity) {
  const std::size_t n = 100000;
  for (double eps : {0.5, 0.9}) {
    const auto d = sample_circle_gap(n, eps, 4);
    std::size_t gap = 0;
    for (int l : d.labels) gap += l == kGapLabel;
    const double gap_len = 4 * std::asin(0.25);
    const double p = (1 - eps) * gap_len / ((2 * pi - gap_len) + (1 - eps) * gap_len);
    EXPECT_NEAR(static_cast<double>(gap) / n, p, 4 * std::sqrt(p * (1 - p) / n)) << eps;
  }
}

TEST(CircleGap, AcceptanceRateWithinFiveStandardErrors) {
  for (double eps : {0.0, 0.5, 0.9, 1.0}) {
    SamplerStats stats;
    sample_on_circle(circle_gap_spec(eps), 50000, 5, 0, &stats);
    const double p = circle_gap_spec(eps).acceptance_rate();
    const double rate = static_cast<double>(stats.accepted) / static_cast<double>(stats.proposals);
    EXPECT_EQ(stats.accepted, 50000u);
    EXPECT_NEAR(rate, p, 5 * std::sqrt(p * (1 - p) / static_cast<double>(stats.proposals)) + 1e-15) << eps;
  }
}

TEST(CircleGap, ReproducibleAndSeedSensitive) {
  EXPECT_EQ(sample_circle_gap(300, 0.9, 7), sample_circle_gap(300, 0.9, 7));
  EXPECT_NE(sample_circle_gap(300, 0.9, 7), sample_circle_gap(300, 0.9, 8));
  EXPECT_NE(sample_circle_gap(300, 0.9, 7, 0), sample_circle_gap(300, 0.9, 7, 1));
}

TEST(CircleGap, RejectsBadArguments) {
  EXPECT_THROW(sample_circle_gap(0, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(sample_circle_gap(10, 1.5, 1), std::invalid_argument);
  EXPECT_THROW(sample_circle_gap(10, -0.1, 1), std::invalid_argument);
  GapDensitySpec overlapping{{{0.0, 2.0}, {1.0, 3.0}}, 0.5, 1.0};
  EXPECT_THROW(overlapping.validate(), std::invalid_argument);
  GapDensitySpec empty{{}, 1.0, 1.0};
  EXPECT_THROW(sample_on_circle(empty, 5, 1), std::invalid_argument);
}

TEST(UniformManifold, CircleAngleHistogramChiSquare) {
  const std::size_t n = 100000, bins = 36;
  const auto d = sample_uniform_manifold(ManifoldSpec::circle(1.0), n, 6);
  std::vector<double> counts(bins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::atan2(d.point(i)[1], d.point(i)[0]);
    if (a < 0) a += 2 * pi;
    counts[std::min(bins - 1, static_cast<std::size_t>(a / (2 * pi) * bins))] += 1;
  }
  const double expected = static_cast<double>(n) / bins;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(bins - 1);
  EXPECT_LT(chi2, boost::math::quantile(boost::math::complement(dist, 1e-3)));
}

TEST(UniformManifold, CircleRadiusAndEmbedding) {
  const auto d = sample_uniform_manifold(ManifoldSpec::circle(2.5, 4), 1000, 7);
  ASSERT_EQ(d.dim, 4u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto p = d.point(i);
    EXPECT_NEAR(std::hypot(p[0], p[1]), 2.5, 1e-12);
    EXPECT_EQ(p[2], 0.0);
    EXPECT_EQ(p[3], 0.0);
  }
}

TEST(UniformManifold, SphereMeanNearOrigin) {
  const std::size_t n = 100000;
  const auto d = sample_uniform_manifold(ManifoldSpec::sphere2(1.0), n, 8);
  double m[3] = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = d.point(i);
    EXPECT_NEAR(p[0] * p[0] + p[1] * p[1] + p[2] * p[2], 1.0, 1e-12);
    for (int k = 0; k < 3; ++k) m[k] += p[k] / n;
  }
  EXPECT_LE(std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]), 3 / std::sqrt(static_cast<double>(n)) * 1.1);
}

TEST(UniformManifold, SegmentStaysOnAxis) {
  const auto d = sample_uniform_manifold(ManifoldSpec::segment(3.0, 3), 2000, 9);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto p = d.point(i);
    EXPECT_GE(p[0], 0.0);
    EXPECT_LT(p[0], 3.0);
    EXPECT_EQ(p[1], 0.0);
    EXPECT_EQ(p[2], 0.0);
  }
  EXPECT_FALSE(d.has_labels());
}

TEST(UniformManifold, RejectsBadSpecs) {
  EXPECT_THROW(sample_uniform_manifold(ManifoldSpec::circle(1.0, 1), 10, 1), std::invalid_argument);
  EXPECT_THROW(sample_uniform_manifold(ManifoldSpec::sphere2(1.0, 2), 10, 1), std::invalid_argument);
  EXPECT_THROW(sample_uniform_manifold(ManifoldSpec::circle(0.0), 10, 1), std::invalid_argument);
  EXPECT_THROW(sample_uniform_manifold(ManifoldSpec::circle(1.0), 0, 1), std::invalid_argument);
}

TEST(BoundedNoise, ZeroRadiusIsIdentity) {
  const auto d = sample_circle_gap(100, 0.5, 10);
  EXPECT_EQ(add_bounded_noise(d, 0.0, 1), d);
}

TEST(BoundedNoise, DisplacementsBoundedWithSpread) {
  const auto d = sample_uniform_manifold(ManifoldSpec::sphere2(1.0), 20000, 11);
  const auto noisy = add_bounded_noise(d, 0.05, 12);
  ASSERT_EQ(noisy.size(), d.size());
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = distance(d.point(i), noisy.point(i));
    EXPECT_LE(r, 0.05 * (1 + 1e-12));
    s1 += r;
    s2 += r * r;
  }
  const double n = static_cast<double>(d.size());
  const double mean = s1 / n;
  EXPECT_GT(s2 / n - mean * mean, 1e-5);
  // Uniform in the 3-ball: E|ξ| = (3/4) r.
  EXPECT_NEAR(mean, 0.75 * 0.05, 0.002);
}

TEST(BoundedNoise, KeepsLabels) {
  const auto d = sample_circle_gap(500, 0.7, 13);
  EXPECT_EQ(add_bounded_noise(d, 0.01, 14).labels, d.labels);
  EXPECT_THROW(add_bounded_noise(d, -1.0, 1), std::invalid_argument);
}
