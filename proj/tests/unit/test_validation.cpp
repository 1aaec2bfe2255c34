#include <gtest/gtest.h>

#include "awc/validation.hpp"

using namespace awc;

TEST(Validation, AllChecksPass) {
  const auto results = run_validation();
  ASSERT_GE(results.size(), 7u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed()) << r.name << " failed at " << r.first_failure << ", worst " << r.worst;
    EXPECT_GT(r.points, 0u) << r.name;
    EXPECT_LE(r.worst, r.tolerance) << r.name;
  }
}

TEST(Validation, PerturbedCoefficientIsCaught) {
  ValidationOptions opts;
  opts.q_perturbation = 1e-3;
  const auto results = run_validation(opts);
  bool closed_form_failed = false;
  for (const auto& r : results)
    if (r.name == "closed-form agreement") {
      closed_form_failed = !r.passed();
      EXPECT_FALSE(r.first_failure.empty());
    }
  EXPECT_TRUE(closed_form_failed);
}

TEST(Validation, CheckNamesAreDistinct) {
  const auto results = run_validation();
  for (std::size_t a = 0; a < results.size(); ++a)
    for (std::size_t b = a + 1; b < results.size(); ++b) EXPECT_NE(results[a].name, results[b].name);
}

TEST(Validation, IndividualFamilies) {
  const auto q = checked_coefficient({});
  EXPECT_TRUE(check_closed_forms(q).passed());
  EXPECT_TRUE(check_volume_bounds(q).passed());
  EXPECT_TRUE(check_derivative(q, {}).passed());
  EXPECT_TRUE(check_coefficient_monotone(q).passed());
  EXPECT_TRUE(check_incomplete_beta({}).passed());
  EXPECT_EQ(check_pinsker().points, 9900u);
  EXPECT_TRUE(check_kl_monotone().passed());
}
