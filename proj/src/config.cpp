#include "aspinn/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aspinn/errors.hpp"

namespace aspinn {

using nlohmann::json;

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::single: return "single";
    case SolverKind::one_level: return "one";
    case SolverKind::two_level: return "two";
  }
  return "?";
}

int ExperimentConfig::dim() const {
  return (problem_id == "smooth1d" || problem_id == "multiscale1d") ? 1 : 2;
}

int ExperimentConfig::coloring() const {
  const int axis_colors = (level == SolverKind::single || per_axis == 1) ? 1 : 2;
  return dim() == 1 ? axis_colors : axis_colors * axis_colors;
}

double ExperimentConfig::resolved_tau() const {
  return tau >= 0.0 ? tau : 1.0 / coloring();
}

namespace {

const char* const kProblemIds[] = {"smooth1d", "multiscale1d", "smooth2d",
                                   "highcontrast2d"};

bool known_problem(const std::string& id) {
  for (const char* p : kProblemIds)
    if (id == p) return true;
  return false;
}

// tolerant typed getter collecting diagnostics instead of throwing
template <typename T>
void fetch(const json& node, const std::string& pointer, T& out,
           std::vector<Diagnostic>& diags, bool required = false) {
  const json* cur = &node;
  try {
    cur = &node.at(json::json_pointer(pointer));
  } catch (const json::exception&) {
    if (required) diags.push_back({pointer, "missing required field"});
    return;
  }
  try {
    out = cur->get<T>();
  } catch (const json::exception& e) {
    diags.push_back({pointer, std::string("wrong type: ") + e.what()});
  }
}

void fetch_tau(const json& node, double& out, std::vector<Diagnostic>& diags) {
  const json* cur = nullptr;
  try {
    cur = &node.at(json::json_pointer("/solver/tau"));
  } catch (const json::exception&) {
    return;  // keep auto
  }
  if (cur->is_string()) {
    if (cur->get<std::string>() == "auto") {
      out = -1.0;
    } else {
      diags.push_back({"/solver/tau", "must be a number or \"auto\""});
    }
  } else if (cur->is_number()) {
    out = cur->get<double>();
  } else {
    diags.push_back({"/solver/tau", "must be a number or \"auto\""});
  }
}

ExperimentConfig experiment_from_json(const json& j, std::vector<Diagnostic>& diags) {
  ExperimentConfig c;
  fetch(j, "/name", c.name, diags);
  fetch(j, "/problem/id", c.problem_id, diags, /*required=*/true);
  fetch(j, "/problem/A", c.problem_A, diags);
  fetch(j, "/problem/eps", c.problem_eps, diags);
  fetch(j, "/partition/per_axis", c.per_axis, diags);
  fetch(j, "/partition/overlap_ratio", c.overlap_ratio, diags);

  std::string level = "one";
  fetch(j, "/solver/level", level, diags, /*required=*/true);
  if (level == "single") c.level = SolverKind::single;
  else if (level == "one") c.level = SolverKind::one_level;
  else if (level == "two") c.level = SolverKind::two_level;
  else diags.push_back({"/solver/level", "must be one of: single, one, two"});

  fetch_tau(j, c.tau, diags);
  fetch(j, "/solver/max_outer", c.max_outer, diags);
  fetch(j, "/solver/warm_start", c.warm_start, diags);
  fetch(j, "/solver/stop_tol", c.stop_tol, diags);

  fetch(j, "/network/local_width", c.local_width, diags);
  fetch(j, "/network/coarse_width", c.coarse_width, diags);
  fetch(j, "/network/single_width", c.single_width, diags);

  fetch(j, "/points/interior_per_sub", c.interior_per_sub, diags);
  fetch(j, "/points/boundary_per_sub", c.boundary_per_sub, diags);
  fetch(j, "/points/coarse_interior", c.coarse_interior, diags);
  fetch(j, "/points/coarse_boundary", c.coarse_boundary, diags);
  fetch(j, "/points/single_interior", c.single_interior, diags);
  fetch(j, "/points/single_boundary", c.single_boundary, diags);

  fetch(j, "/epochs/local", c.local_epochs, diags);
  fetch(j, "/epochs/coarse", c.coarse_epochs, diags);
  fetch(j, "/epochs/single", c.single_epochs, diags);

  fetch(j, "/seeds", c.seeds, diags, /*required=*/true);
  fetch(j, "/eval_grid", c.eval_grid, diags);
  fetch(j, "/out_dir", c.out_dir, diags, /*required=*/true);
  return c;
}

OracleConfig oracle_from_json(const json& j, std::vector<Diagnostic>& diags) {
  OracleConfig c;
  fetch(j, "/name", c.name, diags);
  fetch(j, "/problem/id", c.problem_id, diags, /*required=*/true);
  fetch(j, "/problem/A", c.problem_A, diags);
  fetch(j, "/problem/eps", c.problem_eps, diags);
  fetch(j, "/grid_nodes", c.grid_nodes, diags, /*required=*/true);
  fetch(j, "/per_axis", c.per_axis, diags, /*required=*/true);
  fetch(j, "/taus", c.taus, diags);
  fetch(j, "/levels", c.levels, diags);
  fetch(j, "/overlap_ratio", c.overlap_ratio, diags);
  fetch(j, "/iterations", c.iterations, diags);
  fetch(j, "/coarse_nodes", c.coarse_nodes, diags);
  fetch(j, "/out_dir", c.out_dir, diags, /*required=*/true);
  return c;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = "experiment";
  j["name"] = c.name;
  j["problem"]["id"] = c.problem_id;
  if (c.problem_id == "highcontrast2d") {
    j["problem"]["A"] = c.problem_A;
    j["problem"]["eps"] = c.problem_eps;
  }
  j["partition"]["per_axis"] = c.per_axis;
  j["partition"]["overlap_ratio"] = c.overlap_ratio;
  j["solver"]["level"] = to_string(c.level);
  if (c.tau >= 0.0) j["solver"]["tau"] = c.tau;
  else j["solver"]["tau"] = "auto";
  j["solver"]["max_outer"] = c.max_outer;
  j["solver"]["warm_start"] = c.warm_start;
  j["solver"]["stop_tol"] = c.stop_tol;
  j["network"]["local_width"] = c.local_width;
  j["network"]["coarse_width"] = c.coarse_width;
  j["network"]["single_width"] = c.single_width;
  j["points"]["interior_per_sub"] = c.interior_per_sub;
  j["points"]["boundary_per_sub"] = c.boundary_per_sub;
  j["points"]["coarse_interior"] = c.coarse_interior;
  j["points"]["coarse_boundary"] = c.coarse_boundary;
  j["points"]["single_interior"] = c.single_interior;
  j["points"]["single_boundary"] = c.single_boundary;
  j["epochs"]["local"] = c.local_epochs;
  j["epochs"]["coarse"] = c.coarse_epochs;
  j["epochs"]["single"] = c.single_epochs;
  j["seeds"] = c.seeds;
  j["eval_grid"] = c.eval_grid;
  j["out_dir"] = c.out_dir;
  return j;
}

json to_json(const OracleConfig& c) {
  json j;
  j["kind"] = "oracle";
  j["name"] = c.name;
  j["problem"]["id"] = c.problem_id;
  if (c.problem_id == "highcontrast2d") {
    j["problem"]["A"] = c.problem_A;
    j["problem"]["eps"] = c.problem_eps;
  }
  j["grid_nodes"] = c.grid_nodes;
  j["per_axis"] = c.per_axis;
  j["taus"] = c.taus;
  j["levels"] = c.levels;
  j["overlap_ratio"] = c.overlap_ratio;
  j["iterations"] = c.iterations;
  j["coarse_nodes"] = c.coarse_nodes;
  j["out_dir"] = c.out_dir;
  return j;
}

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
  std::vector<Diagnostic> d;
  if (!known_problem(c.problem_id))
    d.push_back({"/problem/id", "unknown problem id '" + c.problem_id + "'"});
  if (c.problem_id == "highcontrast2d" && !(c.problem_eps > 0.0))
    d.push_back({"/problem/eps", "must be > 0"});

  const bool partitioned = c.level != SolverKind::single;
  if (partitioned) {
    if (c.per_axis < 1) d.push_back({"/partition/per_axis", "must be >= 1"});
    if (!(c.overlap_ratio > 0.0 && c.overlap_ratio < 1.0))
      d.push_back({"/partition/overlap_ratio", "must lie in (0, 1)"});
    const double tau = c.resolved_tau();
    const double bound = 1.0 / c.coloring();
    if (!(tau > 0.0) || tau > bound + 1e-15) {
      std::ostringstream msg;
      msg << "tau = " << tau << " violates 0 < tau <= 1/Nc = " << bound
          << " (Nc = " << c.coloring() << ")";
      d.push_back({"/solver/tau", msg.str()});
    }
    if (c.max_outer < 0) d.push_back({"/solver/max_outer", "must be >= 0"});
    if (c.stop_tol < 0.0) d.push_back({"/solver/stop_tol", "must be >= 0"});
    if (c.local_width < 1) d.push_back({"/network/local_width", "must be >= 1"});
    if (c.interior_per_sub < 1) d.push_back({"/points/interior_per_sub", "must be >= 1"});
    if (c.dim() == 1 && c.boundary_per_sub != 2)
      d.push_back({"/points/boundary_per_sub", "must be 2 for 1D problems"});
    if (c.dim() == 2 && c.boundary_per_sub < 1)
      d.push_back({"/points/boundary_per_sub", "must be >= 1"});
    if (c.local_epochs < 1) d.push_back({"/epochs/local", "must be >= 1"});
  }
  if (c.level == SolverKind::two_level) {
    if (c.coarse_width < 1) d.push_back({"/network/coarse_width", "must be >= 1"});
    if (c.coarse_interior < 1) d.push_back({"/points/coarse_interior", "must be >= 1"});
    if (c.dim() == 1 && c.coarse_boundary != 2)
      d.push_back({"/points/coarse_boundary", "must be 2 for 1D problems"});
    if (c.dim() == 2 && c.coarse_boundary < 1)
      d.push_back({"/points/coarse_boundary", "must be >= 1"});
    if (c.coarse_epochs < 1) d.push_back({"/epochs/coarse", "must be >= 1"});
  }
  if (c.level == SolverKind::single) {
    if (c.single_width < 1) d.push_back({"/network/single_width", "must be >= 1"});
    if (c.single_interior < 1) d.push_back({"/points/single_interior", "must be >= 1"});
    if (c.dim() == 1 && c.single_boundary != 2)
      d.push_back({"/points/single_boundary", "must be 2 for 1D problems"});
    if (c.dim() == 2 && c.single_boundary < 1)
      d.push_back({"/points/single_boundary", "must be >= 1"});
    if (c.single_epochs < 1) d.push_back({"/epochs/single", "must be >= 1"});
  }

  if (c.seeds.empty()) d.push_back({"/seeds", "seed list must not be empty"});
  if (c.eval_grid != 0 && c.eval_grid < 2)
    d.push_back({"/eval_grid", "must be 0 (default) or >= 2"});
  if (c.out_dir.empty()) d.push_back({"/out_dir", "must not be empty"});
  return d;
}

std::vector<Diagnostic> validate(const OracleConfig& c) {
  std::vector<Diagnostic> d;
  if (!known_problem(c.problem_id))
    d.push_back({"/problem/id", "unknown problem id '" + c.problem_id + "'"});
  if (c.grid_nodes < 3) d.push_back({"/grid_nodes", "must be >= 3"});
  if (c.per_axis.empty()) d.push_back({"/per_axis", "must not be empty"});
  for (std::size_t i = 0; i < c.per_axis.size(); ++i)
    if (c.per_axis[i] < 1)
      d.push_back({"/per_axis/" + std::to_string(i), "must be >= 1"});
  const int dim = (c.problem_id == "smooth1d" || c.problem_id == "multiscale1d") ? 1 : 2;
  for (std::size_t i = 0; i < c.taus.size(); ++i) {
    // the sweep may combine several N; check against the loosest bound (N=1)
    // here and exactly per partition at run time
    if (c.taus[i] < 0.0 || c.taus[i] > 1.0)
      d.push_back({"/taus/" + std::to_string(i), "must lie in [0, 1]"});
  }
  (void)dim;
  for (std::size_t i = 0; i < c.levels.size(); ++i)
    if (c.levels[i] != "one" && c.levels[i] != "two")
      d.push_back({"/levels/" + std::to_string(i), "must be 'one' or 'two'"});
  if (!(c.overlap_ratio > 0.0 && c.overlap_ratio < 1.0))
    d.push_back({"/overlap_ratio", "must lie in (0, 1)"});
  if (c.iterations < 0) d.push_back({"/iterations", "must be >= 0"});
  if (c.coarse_nodes != 0 && c.coarse_nodes < 3)
    d.push_back({"/coarse_nodes", "must be 0 (auto) or >= 3"});
  if (c.out_dir.empty()) d.push_back({"/out_dir", "must not be empty"});
  return d;
}

namespace {

std::vector<Diagnostic> parse_file(const std::filesystem::path& path,
                                   AnyConfig* out) {
  std::vector<Diagnostic> diags;
  std::ifstream in(path);
  if (!in) {
    diags.push_back({"", "cannot open file: " + path.string()});
    return diags;
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    diags.push_back({"", std::string("parse error: ") + e.what()});
    return diags;
  }

  std::string kind = "experiment";
  if (j.contains("kind")) {
    fetch(j, "/kind", kind, diags);
  }
  if (kind == "experiment") {
    ExperimentConfig c = experiment_from_json(j, diags);
    if (diags.empty()) {
      auto semantic = validate(c);
      diags.insert(diags.end(), semantic.begin(), semantic.end());
    }
    if (out && diags.empty()) *out = std::move(c);
  } else if (kind == "oracle") {
    OracleConfig c = oracle_from_json(j, diags);
    if (diags.empty()) {
      auto semantic = validate(c);
      diags.insert(diags.end(), semantic.begin(), semantic.end());
    }
    if (out && diags.empty()) *out = std::move(c);
  } else {
    diags.push_back({"/kind", "must be 'experiment' or 'oracle'"});
  }
  return diags;
}

}  // namespace

AnyConfig load_config(const std::filesystem::path& path) {
  AnyConfig out;
  auto diags = parse_file(path, &out);
  if (!diags.empty()) {
    std::ostringstream msg;
    msg << "invalid config " << path.string() << ":";
    for (const Diagnostic& d : diags)
      msg << "\n  " << (d.where.empty() ? "(file)" : d.where) << ": " << d.message;
    throw ConfigError(msg.str());
  }
  return out;
}

std::vector<Diagnostic> check_config_file(const std::filesystem::path& path) {
  return parse_file(path, nullptr);
}

}  // namespace aspinn
