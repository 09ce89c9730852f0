#include <exception>
#include <iostream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "aspinn/config.hpp"
#include "aspinn/errors.hpp"
#include "aspinn/experiment.hpp"

namespace {

int do_run(const std::string& config_path, const aspinn::RunOptions& opts) {
  const aspinn::AnyConfig config = aspinn::load_config(config_path);
  const auto* experiment = std::get_if<aspinn::ExperimentConfig>(&config);
  if (!experiment) {
    std::cerr << "error: " << config_path
              << " is an oracle config; use the `oracle` subcommand\n";
    return 1;
  }
  const aspinn::ExperimentOutcome outcome = aspinn::run_experiment(*experiment, opts);
  std::cout << "wrote " << outcome.summary_path.string() << "\n"
            << "min " << outcome.min_error << "  mean " << outcome.mean_error
            << " over " << outcome.seeds.size() << " seed(s)\n";
  return 0;
}

int do_oracle(const std::string& config_path, const aspinn::RunOptions& opts) {
  const aspinn::AnyConfig config = aspinn::load_config(config_path);
  const auto* oracle = std::get_if<aspinn::OracleConfig>(&config);
  if (!oracle) {
    std::cerr << "error: " << config_path
              << " is an experiment config; use the `run` subcommand\n";
    return 1;
  }
  const auto files = aspinn::run_oracle(*oracle, opts);
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

int do_validate(const std::string& config_path) {
  const auto diags = aspinn::check_config_file(config_path);
  if (diags.empty()) {
    std::cout << config_path << ": OK\n";
    return 0;
  }
  for (const auto& d : diags)
    std::cerr << config_path << ": " << (d.where.empty() ? "(file)" : d.where)
              << ": " << d.message << '\n';
  return 1;
}

int do_report(const std::string& dir, const std::string& out_csv) {
  const int n = aspinn::report(dir, std::cout, out_csv);
  if (n == 0) {
    std::cerr << "no summary.json files under " << dir << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping Schwarz iterations over sine-network collocation "
               "solvers for Poisson problems, with a classical grid-based "
               "Schwarz rate oracle"};
  app.require_subcommand(1);

  aspinn::RunOptions opts;
  app.add_option("--jobs", opts.jobs, "Worker threads for seeds and subdomain solves")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", opts.out_override, "Override the configured output directory");

  std::string config_path;
  std::string report_dir;
  std::string report_csv;

  auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
  run_cmd->fallthrough();
  run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_flag("--desk-scale", opts.desk_scale,
                    "Divide epoch budgets by 5 and outer iterations by 2");

  auto* oracle_cmd = app.add_subcommand("oracle", "Run a grid-based rate sweep");
  oracle_cmd->fallthrough();
  oracle_cmd->add_option("config", config_path, "Oracle config (JSON)")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Check a config file");
  validate_cmd->fallthrough();
  validate_cmd->add_option("config", config_path, "Config (JSON)")->required();

  auto* report_cmd = app.add_subcommand("report", "Aggregate summary.json files");
  report_cmd->fallthrough();
  report_cmd->add_option("dir", report_dir, "Directory to scan")->required();

  CLI11_PARSE(app, argc, argv);

  report_csv = opts.out_override;  // report writes its table there when set

  try {
    if (run_cmd->parsed()) return do_run(config_path, opts);
    if (oracle_cmd->parsed()) return do_oracle(config_path, opts);
    if (validate_cmd->parsed()) return do_validate(config_path);
    if (report_cmd->parsed()) return do_report(report_dir, report_csv);
  } catch (const aspinn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
