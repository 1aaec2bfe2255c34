#pragma once

// The validate | run | sweep | reproduce-circle commands, independent of
// argument parsing so they can be driven from tests.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "awc/coefficients.hpp"
#include "awc/core.hpp"
#include "awc/datagen.hpp"
#include "awc/eval.hpp"
#include "awc/experiments/config.hpp"
#include "awc/experiments/io.hpp"
#include "awc/experiments/sweep.hpp"
#include "awc/lambda_search.hpp"
#include "awc/validation.hpp"

namespace awc::experiments {

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kConfigError = 2, kIoError = 3 };

struct CliOptions {
  std::optional<std::filesystem::path> config_path;
  std::filesystem::path out = "awc_out";
  std::optional<std::uint64_t> seed;  // --seed, beats AWC_SEED and the config
  std::optional<std::string> env_seed;  // value of AWC_SEED, if set
  std::optional<unsigned> threads;
  bool labeled = false;
  double q_perturbation = 0.0;  // test hook for validate
};

/// Applies command-line and environment overrides, then validates. Seed
/// precedence: --seed, then AWC_SEED, then the config.
inline ExperimentConfig apply_overrides(ExperimentConfig cfg, const CliOptions& cli) {
  if (cli.env_seed) {
    const auto v = parse_integer<std::uint64_t>(*cli.env_seed);
    if (!v) throw ConfigError("AWC_SEED", "not an unsigned integer: '" + *cli.env_seed + "'");
    cfg.seed = *v;
  }
  if (cli.seed) cfg.seed = *cli.seed;
  if (cli.threads) cfg.threads = *cli.threads;
  if (cli.labeled) cfg.labeled = true;
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const CliOptions& cli) {
  return apply_overrides(cli.config_path ? parse_config(read_file(*cli.config_path)) : ExperimentConfig{}, cli);
}

inline Dataset make_dataset(const ExperimentConfig& cfg) {
  Dataset data;
  switch (cfg.source) {
    case DataSource::circle_gap:
      data = sample_circle_gap(cfg.n, cfg.eps, cfg.seed);
      break;
    case DataSource::uniform:
      data = sample_uniform_manifold({cfg.manifold, cfg.manifold_size, cfg.ambient_dim}, cfg.n, cfg.seed);
      break;
    case DataSource::file:
      data = parse_dataset(read_file(cfg.input), cfg.labeled);
      try {
        data.validate();
      } catch (const std::invalid_argument& e) {
        throw IoError(cfg.input + ": " + e.what());
      }
      return data;
  }
  return add_bounded_noise(std::move(data), cfg.noise, cfg.seed, 1);
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string optional_number(std::optional<double> v) { return v ? format_double(*v) : std::string(); }

// ---------------------------------------------------------------------------
// validate

inline int cmd_validate(const CliOptions& cli, std::ostream& out) {
  ValidationOptions opts;
  opts.q_perturbation = cli.q_perturbation;
  const auto results = run_validation(opts);
  char line[200];
  std::snprintf(line, sizeof line, "%-34s %8s %8s %12s %10s  %s\n", "check", "points", "failures", "worst", "tolerance",
                "status");
  out << line;
  bool all = true;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-34s %8zu %8zu %12.3e %10.1e  %s\n", r.name.c_str(), r.points, r.failures,
                  r.worst, r.tolerance, r.passed() ? "PASS" : "FAIL");
    out << line;
    if (!r.passed()) {
      out << "  first failure: " << r.first_failure << "\n";
      all = false;
    }
  }
  out << (all ? "all checks passed\n" : "validation FAILED\n");
  return all ? kOk : kCheckFailure;
}

// ---------------------------------------------------------------------------
// run

struct StepSummary {
  std::size_t step = 0;
  double h_prev = 0.0;
  double h = 0.0;
  std::size_t tested = 0;
  std::size_t rejected = 0;
};

struct RunRecord {
  std::string config_hash;
  std::size_t n = 0;
  double lambda = 0.0;
  std::vector<StepSummary> steps;
  std::size_t edges = 0;
  std::optional<double> rand_index;
  std::optional<double> misclassification;
  std::optional<double> best_lambda;  // set when λ was chosen by a grid search
  bool assumptions_ok = true;
  double wall_seconds = 0.0;
};

inline RunRecord cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& dir, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset data = make_dataset(cfg);
  const BandwidthSchedule schedule = cfg.schedule();
  AwcOptions opts;
  opts.radius = cfg.coefficient_radius;
  opts.threads = cfg.threads;

  RunRecord rec;
  rec.config_hash = config_hash(cfg);
  rec.n = data.size();

  double max_ratio = 1.0;
  for (std::size_t k = 1; k < schedule.radii.size(); ++k)
    max_ratio = std::max(max_ratio, schedule.radii[k] / schedule.radii[k - 1]);
  const auto report = check_assumptions(cfg.geometry, schedule.radii.front(), schedule.final_radius(), max_ratio);
  rec.assumptions_ok = report.ok;
  for (const auto& v : report.violations) out << "warning: " << v.name << ": " << v.detail << "\n";

  const bool search = !cfg.lambda_auto && cfg.lambdas.size() > 1;
  if (search) {
    if (!data.has_labels()) throw ConfigError("lambda", "a λ grid needs a labeled dataset");
    const auto sweep = sweep_lambda(data, schedule, cfg.geometry, cfg.lambdas, cfg.h_eval, opts);
    rec.lambda = sweep.min_best_lambda;
    rec.best_lambda = sweep.min_best_lambda;
  } else {
    rec.lambda = cfg.fixed_lambda(data.size());
  }

  const AwcResult res = awc_run(data, schedule, rec.lambda, cfg.geometry, opts);
  for (const auto& s : res.steps) rec.steps.push_back({s.step, s.h_prev, s.h, s.pairs.size(), s.rejected()});
  rec.edges = res.weights.edge_count();
  if (data.has_labels()) {
    const auto pairs = eligible_pairs(res.weights, data, cfg.h_eval);
    if (!pairs.empty()) {
      rec.rand_index = local_rand_index(res.weights, data, cfg.h_eval);
      rec.misclassification = misclassification_rate(res.weights, data, cfg.h_eval);
    }
  }

  ensure_directory(dir);
  write_file(dir / "config.txt", serialize_config(cfg));
  write_file(dir / "dataset.csv", dataset_csv(data, cfg.labeled && data.has_labels()));
  write_file(dir / "weights.csv", edges_csv(res.weights));
  write_file(dir / "diagnostics.csv", diagnostics_csv(res.steps));
  std::vector<CsvRow> step_rows;
  for (const auto& s : rec.steps)
    step_rows.push_back({std::to_string(s.step), format_double(s.h_prev), format_double(s.h), std::to_string(s.tested),
                         std::to_string(s.rejected)});
  write_file(dir / "steps.csv", table_csv({"step", "h_prev", "h", "tested", "rejected"}, step_rows));
  write_file(dir / "metrics.csv",
             table_csv({"config_hash", "n", "lambda", "best_lambda", "edges", "rand_index", "misclassification",
                        "assumptions_ok"},
                       {{rec.config_hash, std::to_string(rec.n), format_double(rec.lambda),
                         optional_number(rec.best_lambda), std::to_string(rec.edges), optional_number(rec.rand_index),
                         optional_number(rec.misclassification), rec.assumptions_ok ? "1" : "0"}}));

  rec.wall_seconds = seconds_since(t0);
  out << "config " << rec.config_hash << ", n = " << rec.n << ", lambda = " << format_shortest(rec.lambda) << "\n";
  for (const auto& s : rec.steps)
    out << "  step " << s.step << ": h = " << format_shortest(s.h) << ", tested " << s.tested << ", rejected "
        << s.rejected << "\n";
  out << "edges " << rec.edges;
  if (rec.rand_index) out << ", rand index " << format_shortest(*rec.rand_index);
  out << "\nwall time " << rec.wall_seconds << " s\n";
  return rec;
}

// ---------------------------------------------------------------------------
// sweep and reproduce-circle

inline SweepSpec sweep_spec(const ExperimentConfig& cfg) {
  if (cfg.source != DataSource::circle_gap) throw ConfigError("source", "sweeps run on circle_gap data only");
  SweepSpec spec;
  spec.eps = cfg.sweep_eps.empty() ? std::vector<double>{cfg.eps} : cfg.sweep_eps;
  spec.n = cfg.sweep_n.empty() ? std::vector<std::size_t>{cfg.n} : cfg.sweep_n;
  spec.lambdas = cfg.lambda_auto ? default_lambda_grid() : cfg.lambdas;
  spec.repeats = cfg.repeats;
  spec.seed = cfg.seed;
  spec.schedule = cfg.schedule();
  spec.geometry = cfg.geometry;
  spec.coefficient_radius = cfg.coefficient_radius;
  spec.h_eval = cfg.h_eval;
  spec.noise = cfg.noise;
  spec.threads = cfg.threads;
  return spec;
}

inline std::string summary_csv(const SweepResult& res) {
  std::vector<CsvRow> rows;
  for (const auto& c : res.cells)
    rows.push_back({format_double(c.eps), std::to_string(c.n), format_double(c.mean_rand),
                    format_double(c.frac_perfect), format_double(c.mean_min_lambda)});
  return table_csv({"eps", "n", "mean_rand", "frac_perfect", "mean_min_lambda"}, rows);
}

inline std::string trials_csv(const SweepResult& res) {
  std::vector<CsvRow> rows;
  for (const auto& t : res.trials)
    rows.push_back({format_double(t.eps), std::to_string(t.n), std::to_string(t.repeat), std::to_string(t.seed),
                    std::to_string(t.eligible_pairs), format_double(t.best_rand), format_double(t.min_best_lambda)});
  return table_csv({"eps", "n", "repeat", "seed", "eligible_pairs", "best_rand", "min_best_lambda"}, rows);
}

inline void print_summary(const SweepResult& res, std::ostream& out) {
  char line[160];
  std::snprintf(line, sizeof line, "%8s %8s %12s %14s %17s\n", "eps", "n", "mean_rand", "frac_perfect",
                "mean_min_lambda");
  out << line;
  for (const auto& c : res.cells) {
    std::snprintf(line, sizeof line, "%8.3g %8zu %12.6f %14.3f %17.4f\n", c.eps, c.n, c.mean_rand, c.frac_perfect,
                  c.mean_min_lambda);
    out << line;
  }
}

inline SweepResult cmd_sweep(const ExperimentConfig& cfg, const std::filesystem::path& dir, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepSpec spec = sweep_spec(cfg);
  SweepResult res = run_sweep(spec);
  ensure_directory(dir);
  write_file(dir / "config.txt", serialize_config(cfg));
  write_file(dir / "summary.csv", summary_csv(res));
  write_file(dir / "trials.csv", trials_csv(res));
  print_summary(res, out);
  out << "wall time " << seconds_since(t0) << " s\n";
  return res;
}

/// The circle experiment: d = 1 with reach and noise taken as zero in the
/// coefficient, h_k = 2^(k/2 - 2) for k = 0..4, evaluation radius 1,
/// λ searched over 0, 0.25, ..., 40, +∞, 100 repeats per cell.
inline ExperimentConfig circle_experiment_config() {
  ExperimentConfig cfg;
  cfg.source = DataSource::circle_gap;
  cfg.radii = circle_schedule().radii;
  cfg.geometry = circle_params();
  cfg.h_eval = 1.0;
  cfg.lambda_auto = false;
  cfg.lambdas = default_lambda_grid();
  cfg.sweep_eps = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  cfg.sweep_n = {100, 200, 400, 800};
  cfg.repeats = 100;
  return cfg;
}

inline constexpr double kLambdaFigureEps = 0.9;

inline SweepResult cmd_reproduce_circle(ExperimentConfig cfg, const std::filesystem::path& dir, std::ostream& out) {
  SweepResult res = cmd_sweep(cfg, dir, out);

  // Figure data: the Rand summaries per ε, and minimal λ against n at ε = 0.9.
  std::vector<CsvRow> rand_rows, lambda_rows;
  std::vector<std::size_t> ns;
  std::vector<double> lambdas;
  for (const auto& c : res.cells) {
    rand_rows.push_back({format_double(c.eps), std::to_string(c.n), format_double(c.mean_rand),
                         format_double(c.frac_perfect)});
    if (c.eps == kLambdaFigureEps) {
      lambda_rows.push_back({std::to_string(c.n), format_double(std::log(static_cast<double>(c.n))),
                             format_double(c.mean_min_lambda)});
      ns.push_back(c.n);
      lambdas.push_back(c.mean_min_lambda);
    }
  }
  write_file(dir / "rand_vs_eps.csv", table_csv({"eps", "n", "mean_rand", "frac_perfect"}, rand_rows));
  write_file(dir / "lambda_vs_n.csv", table_csv({"n", "log_n", "mean_min_lambda"}, lambda_rows));
  if (ns.size() >= 3) {
    const auto trend = lambda_trend(ns, lambdas);
    std::vector<CsvRow> fit_rows;
    for (const auto& [name, f] : {std::pair{"log", trend.log_fit}, std::pair{"linear", trend.linear_fit}})
      fit_rows.push_back({name, format_double(f.intercept), format_double(f.slope), format_double(f.rss),
                          format_double(f.aic)});
    write_file(dir / "lambda_fit.csv", table_csv({"model", "intercept", "slope", "rss", "aic"}, fit_rows));
    out << "lambda ~ " << format_shortest(trend.log_fit.intercept) << " + " << format_shortest(trend.log_fit.slope)
        << " ln n at eps = 0.9 (log fit AIC " << format_shortest(trend.log_fit.aic) << ", linear fit AIC "
        << format_shortest(trend.linear_fit.aic) << ")\n";
  }
  return res;
}

}  // namespace awc::experiments
