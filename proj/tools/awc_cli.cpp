// awc_cli: validate | run | sweep | reproduce-circle

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "awc/experiments/commands.hpp"

namespace ex = awc::experiments;

namespace {

int dispatch(const std::string& command, const ex::CliOptions& cli) {
  if (command == "validate") return ex::cmd_validate(cli, std::cout);
  if (command == "reproduce-circle") {
    if (cli.config_path) throw ex::ConfigError("--config", "reproduce-circle uses fixed parameters");
    const auto cfg = ex::apply_overrides(ex::circle_experiment_config(), cli);
    ex::cmd_reproduce_circle(cfg, cli.out, std::cout);
    return ex::kOk;
  }
  const auto cfg = ex::load_config(cli);
  if (command == "run")
    ex::cmd_run(cfg, cli.out, std::cout);
  else
    ex::cmd_sweep(cfg, cli.out, std::cout);
  return ex::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Weights Clustering experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  ex::CliOptions cli;
  std::string config_path;
  std::string out_dir = cli.out.string();
  std::uint64_t seed = 0;
  unsigned threads = 1;
  app.add_option("--config", config_path, "Config file (key = value lines)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Base seed; overrides AWC_SEED and the config");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--labeled", cli.labeled, "Datasets carry a trailing label column");
  app.add_option("--perturb-q", cli.q_perturbation, "Test hook: scale q_d by (1 + x) in validate")
      ->group("");

  app.add_subcommand("validate", "Run the numerical self-checks");
  app.add_subcommand("run", "Cluster one dataset and write weights, diagnostics and metrics");
  app.add_subcommand("sweep", "Repeated runs over eps and n with a lambda search");
  app.add_subcommand("reproduce-circle", "The circle experiment with fixed parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ex::kOk : ex::kConfigError;
  }

  if (!config_path.empty()) cli.config_path = config_path;
  cli.out = out_dir;
  if (*seed_opt) cli.seed = seed;
  if (*threads_opt) cli.threads = threads;
  if (const char* env = std::getenv("AWC_SEED")) cli.env_seed = env;

  try {
    return dispatch(app.get_subcommands().front()->get_name(), cli);
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kConfigError;
  } catch (const ex::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return ex::kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return ex::kIoError;
  } catch (const std::logic_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return ex::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ex::kCheckFailure;
  }
}
