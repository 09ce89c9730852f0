#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace aspinn {

enum class SolverKind { single, one_level, two_level };

std::string to_string(SolverKind kind);

// One experiment: a problem, a partition, a solver level and its budgets,
// run once per seed. `tau < 0` means "auto" (1/Nc).
struct ExperimentConfig {
  std::string name;

  std::string problem_id;
  double problem_A = 100.0;
  double problem_eps = 0.05;

  int per_axis = 1;
  double overlap_ratio = 1.0 / 3.0;

  SolverKind level = SolverKind::one_level;
  double tau = -1.0;  // -1 = auto
  int max_outer = 50;
  bool warm_start = true;
  double stop_tol = 0.0;

  int local_width = 35;
  int coarse_width = 35;
  int single_width = 323;

  int interior_per_sub = 98;
  int boundary_per_sub = 2;
  int coarse_interior = 98;
  int coarse_boundary = 2;
  int single_interior = 998;
  int single_boundary = 2;

  int local_epochs = 10000;
  int coarse_epochs = 10000;
  int single_epochs = 500000;

  std::vector<std::uint64_t> seeds;
  int eval_grid = 0;  // 0 = dimension default
  std::string out_dir;

  int dim() const;
  int coloring() const;        // Nc of the configured partition
  double resolved_tau() const; // auto -> 1/Nc
};

// Sweep of classical grid-based Schwarz runs.
struct OracleConfig {
  std::string name;

  std::string problem_id;
  double problem_A = 100.0;
  double problem_eps = 0.05;

  int grid_nodes = 241;
  std::vector<int> per_axis;
  std::vector<double> taus;  // empty = auto (1/Nc per partition)
  std::vector<std::string> levels = {"one"};
  double overlap_ratio = 1.0 / 3.0;
  int iterations = 50;
  int coarse_nodes = 0;  // 0 = one interior node per subdomain
  std::string out_dir;
};

using AnyConfig = std::variant<ExperimentConfig, OracleConfig>;

// Path (JSON pointer) plus message for one violated rule.
struct Diagnostic {
  std::string where;
  std::string message;
};

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const OracleConfig& config);

// Schema checks; returns every violation instead of stopping at the first.
std::vector<Diagnostic> validate(const ExperimentConfig& config);
std::vector<Diagnostic> validate(const OracleConfig& config);

// Parses and fully validates a config file ("kind": "experiment" by default,
// or "oracle"). Throws ConfigError with the collected diagnostics when the
// file cannot be used; never applies a partially-read config.
AnyConfig load_config(const std::filesystem::path& path);

// Non-throwing variant for the `validate` subcommand.
std::vector<Diagnostic> check_config_file(const std::filesystem::path& path);

}  // namespace aspinn
