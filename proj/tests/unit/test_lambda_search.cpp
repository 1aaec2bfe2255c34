#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "awc/datagen.hpp"
#include "awc/lambda_search.hpp"

using namespace awc;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// One full run per λ.
std::vector<double> brute_force(const Dataset& d, const std::vector<double>& lambdas, double h_eval) {
  std::vector<double> out;
  for (double l : lambdas) out.push_back(local_rand_index(awc_run(d, circle_schedule(), l, circle_params()).weights, d, h_eval));
  return out;
}

}  // namespace

TEST(LambdaGrid, Layout) {
  const auto g = lambda_grid(0.0, 0.25, 1.0);
  EXPECT_EQ(g, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0, inf}));
  EXPECT_EQ(lambda_grid(0.0, 0.25, 40.0).size(), 162u);
  EXPECT_THROW(lambda_grid(0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(lambda_grid(2.0, 0.5, 1.0), std::invalid_argument);
}

TEST(CountsAtMost, MatchesDirectCount) {
  const std::vector<double> stats{-3.0, 0.0, 0.0, 0.5, 1.0, 2.0, 7.0, inf};
  const std::vector<double> lambdas{-5.0, 0.0, 0.5, 1.5, 7.0, inf};
  const std::vector<std::size_t> members{0, 1, 2, 3, 4, 5};
  const auto counts = detail::counts_at_most(stats, lambdas, members);
  for (std::size_t m = 0; m < members.size(); ++m) {
    std::size_t direct = 0;
    for (double t : stats) direct += t <= lambdas[m];
    EXPECT_EQ(counts[m], direct) << lambdas[m];
  }
}

TEST(SweepLambda, MatchesRunPerLambda) {
  std::vector<double> grid;
  for (double l = -2.0; l <= 12.0; l += 0.5) grid.push_back(l);
  grid.push_back(inf);
  for (std::uint64_t seed = 0; seed < 6; ++seed)
    for (double eps : {0.6, 0.9, 1.0}) {
      const auto d = sample_circle_gap(120 + 20 * seed, eps, seed);
      const auto res = sweep_lambda(d, circle_schedule(), circle_params(), grid, 1.0);
      const auto ref = brute_force(d, grid, 1.0);
      ASSERT_EQ(res.rand_index.size(), ref.size());
      for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_EQ(res.rand_index[k], ref[k]) << seed << " " << grid[k];
    }
}

TEST(SweepLambda, BestAndMinimalBestLambda) {
  const auto d = sample_circle_gap(200, 0.9, 5);
  const std::vector<double> grid{0.0, 1.0, 2.0, 4.0, 8.0, 16.0, inf};
  const auto res = sweep_lambda(d, circle_schedule(), circle_params(), grid, 1.0);
  const double best = *std::max_element(res.rand_index.begin(), res.rand_index.end());
  EXPECT_EQ(res.best_rand_index, best);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < res.min_best_lambda) {
      EXPECT_LT(res.rand_index[k], best);
    } else if (grid[k] == res.min_best_lambda) {
      EXPECT_EQ(res.rand_index[k], best);
    }
  }
  EXPECT_GE(res.step_evaluations, circle_schedule().steps());
}

TEST(SweepLambda, SortsAndDeduplicatesGrid) {
  const auto d = sample_circle_gap(150, 0.8, 6);
  const auto a = sweep_lambda(d, circle_schedule(), circle_params(), {4.0, 1.0, 4.0, 2.0}, 1.0);
  EXPECT_EQ(a.lambdas, (std::vector<double>{1.0, 2.0, 4.0}));
  const auto b = sweep_lambda(d, circle_schedule(), circle_params(), {1.0, 2.0, 4.0}, 1.0);
  EXPECT_EQ(a.rand_index, b.rand_index);
}

TEST(SweepLambda, ThreadCountDoesNotChangeResult) {
  const auto d = sample_circle_gap(500, 0.9, 7);
  AwcOptions many;
  many.threads = 4;
  const auto grid = lambda_grid(0.0, 0.5, 20.0);
  const auto a = sweep_lambda(d, circle_schedule(), circle_params(), grid, 1.0);
  const auto b = sweep_lambda(d, circle_schedule(), circle_params(), grid, 1.0, many);
  EXPECT_EQ(a.rand_index, b.rand_index);
  EXPECT_EQ(a.min_best_lambda, b.min_best_lambda);
}

TEST(SweepLambda, RejectsBadInput) {
  const auto d = sample_circle_gap(50, 0.9, 8);
  EXPECT_THROW(sweep_lambda(d, circle_schedule(), circle_params(), {}, 1.0), std::invalid_argument);
  EXPECT_THROW(sweep_lambda(d, circle_schedule(), circle_params(), {1.0, std::nan("")}, 1.0), std::invalid_argument);
  const Dataset far(1, {0.0, 5.0}, {1, 2});
  EXPECT_THROW(sweep_lambda(far, circle_schedule(), circle_params(), {1.0}, 1.0), std::invalid_argument);
}
