#include "aspinn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aspinn/errors.hpp"
#include "aspinn/oracle_fd.hpp"
#include "aspinn/parallel.hpp"
#include "aspinn/rng.hpp"
#include "aspinn/schwarz.hpp"

namespace aspinn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSingleNetStream = 21;

// fixed-width scientific notation keeps the CSV byte-stable across runs
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

void write_decay_csv(const fs::path& path, const std::vector<IterationRecord>& history,
                     bool two_level) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "iter,rel_l2,mean_local_loss,coarse_loss\n";
  for (const IterationRecord& rec : history) {
    out << rec.iter << ',' << fmt(rec.rel_l2) << ',' << fmt(rec.mean_local_loss) << ',';
    if (two_level) out << fmt(rec.coarse_loss);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SchwarzConfig schwarz_config(const ExperimentConfig& c) {
  SchwarzConfig sc;
  sc.level = c.level == SolverKind::two_level ? Level::two : Level::one;
  sc.tau = c.resolved_tau();
  sc.max_outer = c.max_outer;
  sc.epochs_per_solve = c.local_epochs;
  sc.coarse_epochs = c.coarse_epochs;
  sc.local_width = c.local_width;
  sc.coarse_width = c.coarse_width;
  sc.warm_start = c.warm_start;
  sc.eval_grid = c.eval_grid;
  sc.stop_tol = c.stop_tol;
  return sc;
}

// Plain residual training of one network on the whole domain.
SeedOutcome run_single(const ExperimentConfig& c, const PoissonProblem& problem,
                       std::uint64_t seed, const fs::path& out_dir) {
  OverlapPartition whole;
  whole.domain = problem.domain;
  whole.dim = problem.dim;
  whole.per_axis = 1;
  whole.H = problem.domain.side(0);
  whole.overlap_ratio = 0.0;
  whole.delta = 0.0;
  whole.Nc = 1;
  whole.boxes = {problem.domain};

  TrainingSets sets = sample_training_sets(
      whole, problem, c.single_interior, problem.dim == 1 ? 2 : c.single_boundary,
      0, 0, seed);

  CollocationBatch batch;
  batch.interior = sets.interior[0];
  batch.interior_rhs.reserve(batch.interior.size());
  for (const Point& x : batch.interior) batch.interior_rhs.push_back(problem.f(x));
  batch.boundary = sets.boundary[0];
  batch.boundary_target.reserve(batch.boundary.size());
  for (const Point& x : batch.boundary) batch.boundary_target.push_back(problem.g(x));

  MlpNet start = init_net(derive_seed(seed, {kSingleNetStream}), problem.dim,
                          c.single_width);
  TrainResult res = train(start, batch, c.single_epochs, seed);

  SeedOutcome outcome;
  outcome.seed = seed;
  outcome.final_rel_l2 = relative_l2_error(
      [&res](const Point& x) { return evaluate(res.net, x); }, problem, c.eval_grid);
  outcome.csv_path = out_dir / ("decay_" + std::to_string(seed) + ".csv");

  std::vector<IterationRecord> history(1);
  history[0] = {0, outcome.final_rel_l2, res.loss_history.back(),
                std::numeric_limits<double>::quiet_NaN()};
  write_decay_csv(outcome.csv_path, history, /*two_level=*/false);
  return outcome;
}

SeedOutcome run_partitioned(const ExperimentConfig& c, const PoissonProblem& problem,
                            std::uint64_t seed, const fs::path& out_dir, int jobs) {
  const OverlapPartition partition =
      build_partition(problem.domain, c.per_axis, c.overlap_ratio);
  const bool two = c.level == SolverKind::two_level;
  const TrainingSets sets = sample_training_sets(
      partition, problem, c.interior_per_sub, c.boundary_per_sub,
      two ? c.coarse_interior : 0, two ? c.coarse_boundary : 0, seed);

  RunReport rep = run(problem, partition, sets, schwarz_config(c), seed, jobs);

  SeedOutcome outcome;
  outcome.seed = seed;
  outcome.final_rel_l2 = rep.history.back().rel_l2;
  outcome.csv_path = out_dir / ("decay_" + std::to_string(seed) + ".csv");
  write_decay_csv(outcome.csv_path, rep.history, two);
  return outcome;
}

}  // namespace

ExperimentConfig apply_desk_scale(ExperimentConfig config) {
  config.local_epochs = std::max(1, config.local_epochs / 5);
  config.coarse_epochs = std::max(1, config.coarse_epochs / 5);
  config.single_epochs = std::max(1, config.single_epochs / 5);
  config.max_outer = std::max(1, config.max_outer / 2);
  return config;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config_in,
                                 const RunOptions& opts) {
  ExperimentConfig config = opts.desk_scale ? apply_desk_scale(config_in) : config_in;
  auto diags = validate(config);
  if (!diags.empty()) {
    std::ostringstream msg;
    msg << "invalid experiment config";
    for (const Diagnostic& d : diags) msg << "\n  " << d.where << ": " << d.message;
    throw ConfigError(msg.str());
  }

  const auto t0 = std::chrono::steady_clock::now();
  const PoissonProblem problem =
      problem_by_id(config.problem_id, config.problem_A, config.problem_eps);

  ExperimentOutcome outcome;
  outcome.out_dir = opts.out_override.empty() ? fs::path(config.out_dir)
                                              : fs::path(opts.out_override);
  std::error_code ec;
  fs::create_directories(outcome.out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " +
                             outcome.out_dir.string() + ": " + ec.message());

  const int n_seeds = static_cast<int>(config.seeds.size());
  outcome.seeds.resize(static_cast<std::size_t>(n_seeds));

  // split the worker budget between concurrent seeds and per-run solves
  const int seed_workers = std::max(1, std::min(opts.jobs, n_seeds));
  const int inner_jobs = std::max(1, opts.jobs / seed_workers);
  parallel_for(n_seeds, seed_workers, [&](int s) {
    const std::uint64_t seed = config.seeds[static_cast<std::size_t>(s)];
    outcome.seeds[static_cast<std::size_t>(s)] =
        config.level == SolverKind::single
            ? run_single(config, problem, seed, outcome.out_dir)
            : run_partitioned(config, problem, seed, outcome.out_dir, inner_jobs);
  });

  double min_err = outcome.seeds.front().final_rel_l2;
  double sum_err = 0.0;
  for (const SeedOutcome& s : outcome.seeds) {
    min_err = std::min(min_err, s.final_rel_l2);
    sum_err += s.final_rel_l2;
  }
  outcome.min_error = min_err;
  outcome.mean_error = sum_err / n_seeds;

  json summary;
  summary["name"] = config.name;
  summary["level"] = to_string(config.level);
  summary["per_axis"] = config.level == SolverKind::single ? 1 : config.per_axis;
  summary["tau"] = config.level == SolverKind::single ? 1.0 : config.resolved_tau();
  summary["desk_scale"] = opts.desk_scale;
  json results = json::array();
  for (const SeedOutcome& s : outcome.seeds) {
    json r;
    r["seed"] = s.seed;
    r["rel_l2"] = s.final_rel_l2;
    r["csv"] = s.csv_path.filename().string();
    results.push_back(r);
  }
  summary["results"] = results;
  summary["min"] = outcome.min_error;
  summary["mean"] = outcome.mean_error;
  summary["config"] = to_json(config);
  summary["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  outcome.summary_path = outcome.out_dir / "summary.json";
  std::ofstream out(outcome.summary_path);
  if (!out) throw std::runtime_error("cannot write " + outcome.summary_path.string());
  out << summary.dump(2) << '\n';
  return outcome;
}

std::vector<fs::path> run_oracle(const OracleConfig& config, const RunOptions& opts) {
  auto diags = validate(config);
  if (!diags.empty()) {
    std::ostringstream msg;
    msg << "invalid oracle config";
    for (const Diagnostic& d : diags) msg << "\n  " << d.where << ": " << d.message;
    throw ConfigError(msg.str());
  }

  const PoissonProblem problem =
      problem_by_id(config.problem_id, config.problem_A, config.problem_eps);
  const FdGrid grid = make_grid(problem.domain, config.grid_nodes);

  const fs::path out_dir = opts.out_override.empty() ? fs::path(config.out_dir)
                                                     : fs::path(opts.out_override);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + out_dir.string() +
                             ": " + ec.message());

  std::vector<fs::path> written;
  for (const std::string& level_name : config.levels) {
    const Level level = level_name == "two" ? Level::two : Level::one;
    for (int n : config.per_axis) {
      const OverlapPartition partition =
          build_partition(problem.domain, n, config.overlap_ratio);
      std::vector<double> taus = config.taus;
      if (taus.empty()) taus.push_back(1.0 / partition.Nc);
      for (double tau : taus) {
        const OracleHistory hist = fd_schwarz_run(
            problem, partition, grid, tau, config.iterations, level, config.coarse_nodes);

        std::ostringstream name;
        name << "rate_" << level_name << "_N" << n << "_tau";
        char tbuf[16];
        std::snprintf(tbuf, sizeof(tbuf), "%g", tau);
        name << tbuf << ".csv";
        const fs::path path = out_dir / name.str();

        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "iter,energy_error,ratio\n";
        for (std::size_t i = 0; i < hist.energy_error.size(); ++i) {
          out << i << ',' << fmt(hist.energy_error[i]) << ',';
          if (i > 0) out << fmt(hist.ratio[i - 1]);
          out << '\n';
        }
        written.push_back(path);
      }
    }
  }
  return written;
}

int report(const fs::path& dir, std::ostream& os, const fs::path& csv_out) {
  if (!fs::exists(dir)) throw std::runtime_error("no such directory: " + dir.string());

  std::vector<fs::path> summaries;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() == "summary.json")
      summaries.push_back(entry.path());
  std::sort(summaries.begin(), summaries.end());

  struct Row {
    std::string name, level;
    int per_axis = 0;
    double tau = 0.0;
    std::size_t n_seeds = 0;
    double min = 0.0, mean = 0.0;
  };
  std::vector<Row> rows;
  for (const fs::path& p : summaries) {
    std::ifstream in(p);
    json j;
    try {
      j = json::parse(in);
      Row r;
      r.name = j.value("name", p.parent_path().filename().string());
      r.level = j.value("level", "?");
      r.per_axis = j.value("per_axis", 0);
      r.tau = j.value("tau", 0.0);
      r.n_seeds = j.value("results", json::array()).size();
      r.min = j.value("min", 0.0);
      r.mean = j.value("mean", 0.0);
      rows.push_back(r);
    } catch (const json::exception& e) {
      os << "skipping " << p.string() << ": " << e.what() << '\n';
    }
  }

  os << std::left << std::setw(28) << "name" << std::setw(8) << "level"
     << std::setw(6) << "N" << std::setw(10) << "tau" << std::setw(7) << "seeds"
     << std::setw(12) << "min" << std::setw(12) << "mean" << '\n';
  for (const Row& r : rows) {
    std::ostringstream mins, means, taus;
    mins << std::scientific << std::setprecision(3) << r.min;
    means << std::scientific << std::setprecision(3) << r.mean;
    taus << std::setprecision(4) << r.tau;
    os << std::left << std::setw(28) << r.name << std::setw(8) << r.level
       << std::setw(6) << r.per_axis << std::setw(10) << taus.str() << std::setw(7)
       << r.n_seeds << std::setw(12) << mins.str() << std::setw(12) << means.str()
       << '\n';
  }

  if (!csv_out.empty()) {
    std::ofstream out(csv_out);
    if (!out) throw std::runtime_error("cannot write " + csv_out.string());
    out << "name,level,per_axis,tau,seeds,min,mean\n";
    for (const Row& r : rows)
      out << r.name << ',' << r.level << ',' << r.per_axis << ',' << r.tau << ','
          << r.n_seeds << ',' << fmt(r.min) << ',' << fmt(r.mean) << '\n';
  }
  return static_cast<int>(rows.size());
}

}  // namespace aspinn
