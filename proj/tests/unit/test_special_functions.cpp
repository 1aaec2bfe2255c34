#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "awc/eval.hpp"
#include "awc/special_functions.hpp"
#include "support/oracles.hpp"

using namespace awc;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(PrecisionConfig, Validates) {
  EXPECT_NO_THROW(PrecisionConfig{}.validate());
  EXPECT_THROW((PrecisionConfig{0.0, 1000}.validate()), std::invalid_argument);
  EXPECT_THROW((PrecisionConfig{1e-5, 1000}.validate()), std::invalid_argument);
  EXPECT_THROW((PrecisionConfig{1e-13, 99}.validate()), std::invalid_argument);
}

TEST(LogGamma, KnownValues) {
  EXPECT_DOUBLE_EQ(log_gamma(1.0), 0.0);
  EXPECT_NEAR(log_gamma(0.5), 0.5723649429247001, 1e-15);
  EXPECT_NEAR(log_gamma(10.0), std::log(362880.0), 1e-13);
}

TEST(LogGamma, AgreesWithStdLgamma) {
  for (double x = 0.5; x <= 1e4; x *= 1.37) {
    const double ref = std::lgamma(x);
    const double tol = 1e-13 * std::max(std::abs(ref), 1e-2);
    EXPECT_NEAR(log_gamma(x), ref, tol) << "x = " << x;
  }
}

TEST(LogGamma, RejectsNonPositive) {
  EXPECT_THROW(log_gamma(0.0), std::domain_error);
  EXPECT_THROW(log_gamma(-1.5), std::domain_error);
}

TEST(Beta, KnownValues) {
  EXPECT_NEAR(beta(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(beta(1, 0.5), 2.0, 1e-15);
  EXPECT_NEAR(beta(1.5, 0.5), pi / 2, 1e-15);
}

TEST(Beta, RejectsNonPositive) {
  EXPECT_THROW(beta(0, 1), std::domain_error);
  EXPECT_THROW(beta(1, -0.5), std::domain_error);
}

TEST(IncompleteBeta, KnownValues) {
  EXPECT_EQ(incomplete_beta(0.0, 2.5, 0.5), 0.0);
  EXPECT_NEAR(incomplete_beta(1.0, 1.5, 0.5), pi / 2, 1e-15);
  EXPECT_NEAR(incomplete_beta(0.75, 1.0, 0.5), 1.0, 1e-14);
}

TEST(IncompleteBeta, AgreesWithQuadrature) {
  for (double a : {0.5, 1.0, 1.5, 5.0, 10.5})
    for (int k = 1; k <= 9; ++k) {
      const double x = 0.1 * k;
      const double ref = oracle::incomplete_beta_quadrature(x, a, 0.5);
      EXPECT_NEAR(incomplete_beta(x, a, 0.5), ref, 1e-10 * ref) << "a = " << a << ", x = " << x;
    }
}

TEST(IncompleteBeta, AgreesWithSeries) {
  for (double a : {0.5, 2.0, 7.5})
    for (double b : {0.5, 1.0, 3.0})
      for (double x : {0.05, 0.3, 0.6, 0.85}) {
        const double s = incomplete_beta_series(x, a, b);
        EXPECT_NEAR(incomplete_beta(x, a, b), s, 1e-11 * s) << a << " " << b << " " << x;
      }
}

TEST(IncompleteBeta, MonotoneInX) {
  double prev = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double v = incomplete_beta(0.01 * k, 3.5, 0.5);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_NEAR(prev, beta(3.5, 0.5), 1e-14);
}

TEST(IncompleteBeta, RejectsBadArguments) {
  EXPECT_THROW(incomplete_beta(-0.1, 1, 1), std::domain_error);
  EXPECT_THROW(incomplete_beta(1.1, 1, 1), std::domain_error);
  EXPECT_THROW(incomplete_beta(0.5, 0, 1), std::domain_error);
  EXPECT_THROW(incomplete_beta(0.5, 1, -1), std::domain_error);
}

TEST(VolumeCoefficient, KnownValues) {
  EXPECT_EQ(volume_coefficient(7, 0.0), 1.0);
  EXPECT_NEAR(volume_coefficient(1, 1.0), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(volume_coefficient(2, 1.0), 0.24301, 5e-6);
}

TEST(VolumeCoefficient, IntervalClosedForm) {
  for (int k = 0; k <= 199; ++k) {
    const double s = 0.01 * k;
    EXPECT_NEAR(volume_coefficient(1, s), (2.0 - s) / (2.0 + s), 1e-12) << "s = " << s;
  }
}

TEST(VolumeCoefficient, LensAndCapClosedForms) {
  for (int d : {2, 3})
    for (int k = 1; k <= 39; ++k) {
      const double s = 0.05 * k;
      EXPECT_NEAR(volume_coefficient(d, s), lens_ratio_closed_form(d, s), 1e-9) << d << " " << s;
    }
}

TEST(VolumeCoefficient, StrictlyDecreasingInS) {
  for (int d : {1, 2, 4, 10, 50}) {
    double prev = volume_coefficient(d, 0.0);
    for (int k = 1; k <= 199; ++k) {
      const double v = volume_coefficient(d, 0.01 * k);
      EXPECT_LT(v, prev) << d << " " << 0.01 * k;
      prev = v;
    }
  }
}

TEST(VolumeCoefficient, DecaysWithDimension) {
  for (double s : {0.1, 0.7, 1.3, 1.9})
    for (int d = 1; d < 30; ++d) EXPECT_LT(volume_coefficient(d + 1, s), volume_coefficient(d, s)) << d << " " << s;
}

TEST(VolumeCoefficient, StaysInUnitIntervalForLargeDimension) {
  for (double s : {0.01, 0.5, 1.0, 1.99}) {
    const double v = volume_coefficient(300, s);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(VolumeCoefficient, SmallSKeepsPrecision) {
  // 1 - q_1(s) = 2s / (2 + s) without cancellation.
  const double s = 1e-9;
  EXPECT_NEAR(1.0 - volume_coefficient(1, s), 2 * s / (2 + s), 1e-15);
}

TEST(VolumeCoefficient, RejectsOutOfDomain) {
  EXPECT_THROW(volume_coefficient(1, -0.1), std::domain_error);
  EXPECT_THROW(volume_coefficient(1, 2.0), std::domain_error);
  EXPECT_THROW(volume_coefficient(0, 1.0), std::domain_error);
}

TEST(VolumeCoefficient, ClassMatchesFunction) {
  const VolumeCoefficient q(4);
  for (double s : {0.0, 0.3, 1.1, 1.95}) EXPECT_EQ(q(s), volume_coefficient(4, s));
}

TEST(VolumeCoefficientDerivative, IntervalValue) {
  EXPECT_NEAR(volume_coefficient_derivative(1, 1.0), -4.0 / 9.0, 1e-14);
}

TEST(VolumeCoefficientDerivative, MatchesFiniteDifferences) {
  const double h = 1e-6;
  for (int d : {1, 2, 3, 5, 10})
    for (int k = 1; k <= 38; ++k) {
      const double t = 0.05 * k;
      const double fd = (volume_coefficient(d, t + h) - volume_coefficient(d, t - h)) / (2 * h);
      const double an = volume_coefficient_derivative(d, t);
      EXPECT_NEAR(an, fd, 1e-6 * std::abs(an)) << d << " " << t;
    }
}

TEST(VolumeCoefficientDerivative, AtZeroMatchesOneSidedDifference) {
  const double h = 1e-7;
  const double fd = (volume_coefficient(3, h) - volume_coefficient(3, 0.0)) / h;
  EXPECT_NEAR(volume_coefficient_derivative(3, 0.0), fd, 1e-5);
}

TEST(VolumeCoefficientDerivative, NonPositiveAndBounded) {
  for (int d : {1, 2, 6, 20})
    for (int k = 0; k < 40; ++k) {
      const double t = 0.049 * k;
      const double v = volume_coefficient_derivative(d, t);
      EXPECT_LE(v, 0.0);
      EXPECT_LE(std::abs(v), 2.0 / beta(0.5 * (d + 1), 0.5) * (1 + 1e-12));
    }
}

TEST(VolumeCoefficientDerivative, RejectsOutOfDomain) {
  EXPECT_THROW(volume_coefficient_derivative(2, -0.01), std::domain_error);
  EXPECT_THROW(volume_coefficient_derivative(2, 2.0), std::domain_error);
}

TEST(VolumeCoefficientBounds, IntervalValues) {
  const auto b = volume_coefficient_bounds(1, 1.0);
  EXPECT_NEAR(b.lower, 0.75 / (2 * std::sqrt(2.0) * std::sqrt(pi)), 1e-15);
  EXPECT_NEAR(b.lower, 0.14960, 5e-6);
  EXPECT_NEAR(b.upper, 1.19683, 5e-6);
  EXPECT_LE(b.lower, 1.0 / 3.0);
  EXPECT_GE(b.upper, 1.0 / 3.0);
}

TEST(VolumeCoefficientBounds, SandwichOnGrid) {
  const auto five = volume_coefficient_bounds(5, 0.5);
  EXPECT_LE(five.lower, volume_coefficient(5, 0.5));
  EXPECT_LE(volume_coefficient(5, 0.5), five.upper);
  for (int d = 1; d <= 20; ++d)
    for (int k = 1; k <= 19; ++k) {
      const double s = 0.1 * k;
      const auto b = volume_coefficient_bounds(d, s);
      const double q = volume_coefficient(d, s);
      EXPECT_LE(b.lower, q) << d << " " << s;
      EXPECT_LE(q, b.upper) << d << " " << s;
    }
}

TEST(VolumeCoefficientBounds, RejectsOutOfDomain) {
  EXPECT_THROW(volume_coefficient_bounds(1, 0.0), std::domain_error);
  EXPECT_THROW(volume_coefficient_bounds(1, 2.0), std::domain_error);
  EXPECT_THROW(volume_coefficient_bounds(0, 1.0), std::domain_error);
}
