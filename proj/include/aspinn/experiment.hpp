#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aspinn/config.hpp"

namespace aspinn {

struct RunOptions {
  int jobs = 1;
  bool desk_scale = false;  // epochs / 5, outer iterations / 2
  std::string out_override;
};

// Budget reduction applied by --desk-scale.
ExperimentConfig apply_desk_scale(ExperimentConfig config);

struct SeedOutcome {
  std::uint64_t seed = 0;
  double final_rel_l2 = 0.0;
  std::filesystem::path csv_path;
};

struct ExperimentOutcome {
  std::vector<SeedOutcome> seeds;
  double min_error = 0.0;
  double mean_error = 0.0;
  std::filesystem::path summary_path;
  std::filesystem::path out_dir;
};

// Runs the configured solver once per seed; writes decay_<seed>.csv per seed
// plus summary.json with per-seed finals and their min/mean.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const RunOptions& opts = {});

// Runs the level x per_axis x tau sweep; writes one
// rate_<level>_N<n>_tau<t>.csv per combination.
std::vector<std::filesystem::path> run_oracle(const OracleConfig& config,
                                              const RunOptions& opts = {});

// Aggregates every summary.json under `dir` into a fixed-width table; returns
// the number of summaries found. When csv_out is non-empty, also writes the
// table as CSV.
int report(const std::filesystem::path& dir, std::ostream& os,
           const std::filesystem::path& csv_out = {});

}  // namespace aspinn
