#pragma once

// Local Rand index as a function of λ over a grid, for one dataset.
//
// The statistics of step k depend on λ only through the matrix of step k-1,
// so grid values that produce the same matrix share all later work. Within a
// step, two λ values give the same matrix exactly when no statistic T falls
// in between them.

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "awc/core.hpp"
#include "awc/eval.hpp"

namespace awc {

struct LambdaSweepResult {
  std::vector<double> lambdas;      // ascending
  std::vector<double> rand_index;   // one per lambda
  double best_rand_index = 0.0;
  double min_best_lambda = 0.0;     // smallest grid λ attaining the best index
  std::size_t step_evaluations = 0; // distinct (step, matrix) nodes visited
};

namespace detail {

// Eligible pairs split by ground truth, located in the final step's plan.
// Pairs outside the plan end with weight 0 whatever λ is.
struct FinalScoring {
  std::vector<std::size_t> same_positions;
  std::vector<std::size_t> cross_positions;
  std::size_t same_outside = 0;   // always misclassified
  std::size_t cross_outside = 0;  // always correct
  std::size_t total = 0;

  FinalScoring(const StepPlan& last, const std::vector<PairClassification>& eligible) : total(eligible.size()) {
    const auto before = [](const PairDiagnostic& p, const PairClassification& e) {
      return p.i < e.i || (p.i == e.i && p.j < e.j);
    };
    for (const auto& e : eligible) {
      const auto it = std::lower_bound(last.pairs.begin(), last.pairs.end(), e, before);
      const bool planned = it != last.pairs.end() && it->i == e.i && it->j == e.j;
      const auto pos = static_cast<std::size_t>(it - last.pairs.begin());
      if (planned)
        (e.same_cluster ? same_positions : cross_positions).push_back(pos);
      else
        ++(e.same_cluster ? same_outside : cross_outside);
    }
  }
};

// For each member λ (ascending), the number of statistics <= λ.
inline std::vector<std::size_t> counts_at_most(const std::vector<double>& stats, const std::vector<double>& lambdas,
                                               const std::vector<std::size_t>& members) {
  std::vector<double> grid(members.size());
  for (std::size_t m = 0; m < members.size(); ++m) grid[m] = lambdas[members[m]];
  std::vector<std::size_t> counts(members.size() + 1, 0);
  for (double t : stats) {
    const auto slot = t <= grid.front() ? 0 : std::lower_bound(grid.begin(), grid.end(), t) - grid.begin();
    ++counts[static_cast<std::size_t>(slot)];
  }
  counts.pop_back();
  for (std::size_t m = 1; m < counts.size(); ++m) counts[m] += counts[m - 1];
  return counts;
}

// Statistics of the planned pairs at `positions` (all pairs when null),
// exact except that any T <= 0 may be reported as 0 once
// floor >= 0: the search only compares T against λ values >= floor.
inline std::vector<double> node_statistics(const StepPlan& plan, const WeightMatrix& prev,
                                           const std::vector<std::size_t>* positions, double floor,
                                           unsigned threads) {
  const std::size_t count = positions ? positions->size() : plan.pairs.size();
  std::vector<double> stats(count);
  const GapCounter counter(prev);
  parallel_chunks(count, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const PairDiagnostic& p = plan.pairs[positions ? (*positions)[k] : k];
      if (floor >= 0.0) {
        const GapCounts c = counter(p.i, p.j);
        if (c.union_mass == 0 || static_cast<double>(c.shared) / c.union_mass >= p.q) {
          stats[k] = 0.0;
          continue;
        }
      }
      stats[k] = pair_statistic(p, counter);
    }
  });
  return stats;
}

struct LambdaSearch {
  const Dataset& data;
  const std::vector<StepPlan>& plans;
  const FinalScoring& final_scoring;
  const std::vector<double>& lambdas;
  std::vector<double>& scores;
  unsigned threads = 1;
  std::size_t evaluations = 0;

  // Last step: the weight of an eligible pair is 1(T <= λ), so the index for
  // every λ follows from the sorted statistics without building matrices.
  void score_leaf(const WeightMatrix& prev, const std::vector<std::size_t>& members) {
    const StepPlan& plan = plans.back();
    const double floor = lambdas[members.front()];
    const auto same = node_statistics(plan, prev, &final_scoring.same_positions, floor, threads);
    const auto cross = node_statistics(plan, prev, &final_scoring.cross_positions, floor, threads);
    const auto linked_same = counts_at_most(same, lambdas, members);
    const auto linked_cross = counts_at_most(cross, lambdas, members);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const std::size_t correct = linked_same[k] + cross.size() - linked_cross[k] + final_scoring.cross_outside;
      scores[members[k]] = static_cast<double>(correct) / static_cast<double>(final_scoring.total);
    }
  }

  void descend(std::size_t step, const WeightMatrix& prev, const std::vector<std::size_t>& members) {
    ++evaluations;
    if (step == plans.size()) {
      score_leaf(prev, members);
      return;
    }
    const StepPlan& plan = plans[step - 1];
    const std::vector<double> stats = node_statistics(plan, prev, nullptr, lambdas[members.front()], threads);
    const auto linked = counts_at_most(stats, lambdas, members);

    std::size_t g = 0;
    while (g < members.size()) {
      std::size_t end = g + 1;
      while (end < members.size() && linked[end] == linked[g]) ++end;
      const WeightMatrix next = threshold_weights(plan.pairs, stats, data.size(), lambdas[members[g]]);
      descend(step + 1, next, {members.begin() + static_cast<std::ptrdiff_t>(g),
                               members.begin() + static_cast<std::ptrdiff_t>(end)});
      g = end;
    }
  }
};

}  // namespace detail

/// Runs the full procedure for every λ in `lambdas` and scores the final
/// weights with the local Rand index at radius h_eval.
inline LambdaSweepResult sweep_lambda(const Dataset& data, const BandwidthSchedule& schedule,
                                      const GeometryParams& params, std::vector<double> lambdas, double h_eval,
                                      const AwcOptions& opts = {}) {
  data.validate();
  schedule.validate();
  params.validate();
  if (lambdas.empty()) throw std::invalid_argument("sweep_lambda: empty lambda grid");
  for (double l : lambdas)
    if (std::isnan(l)) throw std::invalid_argument("sweep_lambda: NaN in lambda grid");
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  std::vector<StepPlan> plans;
  for (std::size_t k = 1; k < schedule.radii.size(); ++k)
    plans.push_back(plan_step(data, schedule.radii[k - 1], schedule.radii[k], params, opts));

  const WeightMatrix w0 = init_weights(data, schedule.radii.front());
  const auto eligible = eligible_pairs(w0, data, h_eval);
  if (eligible.empty()) throw std::invalid_argument("sweep_lambda: no eligible pair within the evaluation radius");

  LambdaSweepResult res;
  res.lambdas = lambdas;
  res.rand_index.assign(lambdas.size(), 0.0);
  std::vector<std::size_t> all(lambdas.size());
  for (std::size_t m = 0; m < all.size(); ++m) all[m] = m;

  const detail::FinalScoring final_scoring(plans.back(), eligible);
  detail::LambdaSearch search{data, plans, final_scoring, res.lambdas, res.rand_index, opts.threads};
  search.descend(1, w0, all);
  res.step_evaluations = search.evaluations;

  res.best_rand_index = *std::max_element(res.rand_index.begin(), res.rand_index.end());
  for (std::size_t m = 0; m < lambdas.size(); ++m)
    if (res.rand_index[m] == res.best_rand_index) {
      res.min_best_lambda = lambdas[m];
      break;
    }
  return res;
}

/// 0, step, 2 step, ..., up to `stop`, then +∞.
inline std::vector<double> lambda_grid(double start, double step, double stop) {
  if (!(step > 0.0) || !(stop >= start)) throw std::invalid_argument("lambda_grid: bad range");
  std::vector<double> g;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) g.push_back(start + step * static_cast<double>(k));
  g.push_back(std::numeric_limits<double>::infinity());
  return g;
}

}  // namespace awc
