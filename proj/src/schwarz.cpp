#include "aspinn/schwarz.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "aspinn/errors.hpp"
#include "aspinn/parallel.hpp"
#include "aspinn/rng.hpp"

namespace aspinn {

namespace {

// seed stream tags
constexpr std::uint64_t kLocalNetStream = 11;
constexpr std::uint64_t kCoarseNetStream = 12;
constexpr std::uint64_t kLocalRestartStream = 13;
constexpr std::uint64_t kCoarseRestartStream = 14;

int default_grid(int dim) { return dim == 1 ? 1001 : 101; }

struct EvalGrid {
  std::vector<Point> points;
  std::vector<double> weights;
  std::vector<std::vector<int>> owners;
  std::vector<double> exact;
  double exact_norm = 0.0;  // sqrt(sum w * exact^2)
};

EvalGrid make_eval_grid(const PoissonProblem& problem,
                        const OverlapPartition& partition, int per_axis) {
  if (!problem.exact)
    throw ContractError("relative_l2_error: problem has no exact solution");
  if (per_axis <= 0) per_axis = default_grid(problem.dim);
  if (per_axis < 2) throw ConfigError("eval grid needs at least 2 points per axis");

  EvalGrid grid;
  const Box& dom = problem.domain;
  if (problem.dim == 1) {
    const double h = dom.side(0) / (per_axis - 1);
    grid.points.reserve(static_cast<std::size_t>(per_axis));
    for (int i = 0; i < per_axis; ++i) {
      const double x = i == per_axis - 1 ? dom.hi[0] : dom.lo[0] + i * h;
      grid.points.push_back({x, 0.0});
      grid.weights.push_back(h * ((i == 0 || i == per_axis - 1) ? 0.5 : 1.0));
    }
  } else {
    const double hx = dom.side(0) / (per_axis - 1);
    const double hy = dom.side(1) / (per_axis - 1);
    grid.points.reserve(static_cast<std::size_t>(per_axis) * per_axis);
    for (int j = 0; j < per_axis; ++j) {
      const double y = j == per_axis - 1 ? dom.hi[1] : dom.lo[1] + j * hy;
      const double wy = hy * ((j == 0 || j == per_axis - 1) ? 0.5 : 1.0);
      for (int i = 0; i < per_axis; ++i) {
        const double x = i == per_axis - 1 ? dom.hi[0] : dom.lo[0] + i * hx;
        const double wx = hx * ((i == 0 || i == per_axis - 1) ? 0.5 : 1.0);
        grid.points.push_back({x, y});
        grid.weights.push_back(wx * wy);
      }
    }
  }

  grid.owners.reserve(grid.points.size());
  grid.exact.reserve(grid.points.size());
  double norm2 = 0.0;
  for (std::size_t p = 0; p < grid.points.size(); ++p) {
    grid.owners.push_back(partition.owners(grid.points[p]));
    const double u = problem.exact(grid.points[p]);
    grid.exact.push_back(u);
    norm2 += grid.weights[p] * u * u;
  }
  grid.exact_norm = std::sqrt(norm2);
  return grid;
}

double uhat_at(const SchwarzState& state, const Point& x,
               const std::vector<int>& owners) {
  double sum = 0.0;
  for (int i : owners) sum += evaluate(state.local_nets[static_cast<std::size_t>(i)], x);
  if (state.config.level == Level::two) sum += evaluate(state.coarse_net, x);
  return sum / static_cast<double>(owners.size());
}

}  // namespace

SchwarzState init_state(const PoissonProblem& problem,
                        const OverlapPartition& partition,
                        const TrainingSets& sets, const SchwarzConfig& config,
                        std::uint64_t seed) {
  if (partition.dim != problem.dim)
    throw ContractError("init_state: partition/problem dimension mismatch");
  if (!(config.tau > 0.0) || config.tau * partition.Nc > 1.0)
    throw ConfigError("init_state: tau must satisfy 0 < tau*Nc <= 1");
  const int n = partition.count();
  if (static_cast<int>(sets.interior.size()) != n ||
      static_cast<int>(sets.boundary.size()) != n)
    throw ContractError("init_state: training sets do not match the partition");
  if (config.level == Level::two &&
      (sets.coarse_interior.empty() || sets.coarse_boundary.empty()))
    throw ContractError("init_state: two-level run requires coarse point sets");

  SchwarzState state;
  state.problem = problem;
  state.partition = partition;
  state.sets = sets;
  state.config = config;
  state.seed = seed;

  state.local_nets.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    state.local_nets.push_back(init_net(
        derive_seed(seed, {kLocalNetStream, static_cast<std::uint64_t>(i)}),
        problem.dim, config.local_width));
  if (config.level == Level::two)
    state.coarse_net = init_net(derive_seed(seed, {kCoarseNetStream}),
                                problem.dim, config.coarse_width);

  state.table.boundary.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& entries = state.table.boundary[static_cast<std::size_t>(i)];
    entries.reserve(sets.boundary[static_cast<std::size_t>(i)].size());
    for (const Point& x : sets.boundary[static_cast<std::size_t>(i)]) {
      TableEntry e;
      e.x = x;
      e.owners = partition.owners(x);
      e.pinned = problem.domain.on_boundary(x);
      e.value = e.pinned ? problem.g(x) : 0.0;
      entries.push_back(std::move(e));
    }
  }
  if (config.level == Level::two) {
    state.table.coarse.reserve(sets.coarse_interior.size());
    for (const Point& x : sets.coarse_interior) {
      TableEntry e;
      e.x = x;
      e.owners = partition.owners(x);
      e.value = 0.0;
      state.table.coarse.push_back(std::move(e));
    }
  }

  state.local_f.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& fv = state.local_f[static_cast<std::size_t>(i)];
    fv.reserve(sets.interior[static_cast<std::size_t>(i)].size());
    for (const Point& x : sets.interior[static_cast<std::size_t>(i)])
      fv.push_back(problem.f(x));
  }
  state.coarse_f.reserve(sets.coarse_interior.size());
  for (const Point& x : sets.coarse_interior) state.coarse_f.push_back(problem.f(x));

  state.last_local_loss.assign(static_cast<std::size_t>(n),
                               std::numeric_limits<double>::quiet_NaN());
  state.last_coarse_loss = std::numeric_limits<double>::quiet_NaN();
  return state;
}

CollocationBatch make_local_batch(const SchwarzState& state, int i) {
  const std::size_t iu = static_cast<std::size_t>(i);
  CollocationBatch batch;
  batch.interior = state.sets.interior[iu];
  batch.interior_rhs = state.local_f[iu];
  batch.boundary = state.sets.boundary[iu];
  batch.boundary_target.reserve(state.table.boundary[iu].size());
  for (const TableEntry& e : state.table.boundary[iu])
    batch.boundary_target.push_back(e.value);
  return batch;
}

CollocationBatch make_coarse_batch(const SchwarzState& state) {
  if (state.config.level != Level::two)
    throw ContractError("make_coarse_batch: coarse problem exists only in two-level mode");
  if (state.table.coarse.size() != state.sets.coarse_interior.size())
    throw ContractError("make_coarse_batch: iterate table misses coarse interior points");
  CollocationBatch batch;
  batch.interior = state.sets.coarse_interior;
  batch.interior_rhs = state.coarse_f;
  batch.interior_rhs_offset.reserve(state.table.coarse.size());
  for (const TableEntry& e : state.table.coarse)
    batch.interior_rhs_offset.push_back(e.value);
  batch.boundary = state.sets.coarse_boundary;
  batch.boundary_target.assign(state.sets.coarse_boundary.size(), 0.0);
  return batch;
}

TrainResult local_solve(const SchwarzState& state, int i) {
  if (i < 0 || i >= state.partition.count())
    throw ContractError("local_solve: subdomain index out of range");
  const CollocationBatch batch = make_local_batch(state, i);
  MlpNet start = state.local_nets[static_cast<std::size_t>(i)];
  if (!state.config.warm_start)
    start = init_net(
        derive_seed(state.seed,
                    {kLocalRestartStream, static_cast<std::uint64_t>(i),
                     static_cast<std::uint64_t>(state.table.iteration)}),
        state.problem.dim, state.config.local_width);
  return train(start, batch, state.config.epochs_per_solve, state.seed);
}

TrainResult coarse_solve(const SchwarzState& state) {
  if (state.config.level != Level::two)
    throw ContractError("coarse_solve: called in one-level mode");
  const CollocationBatch batch = make_coarse_batch(state);
  MlpNet start = state.coarse_net;
  if (!state.config.warm_start)
    start = init_net(
        derive_seed(state.seed, {kCoarseRestartStream,
                                 static_cast<std::uint64_t>(state.table.iteration)}),
        state.problem.dim, state.config.coarse_width);
  return train(start, batch, state.config.coarse_epochs, state.seed);
}

double evaluate_uhat(const SchwarzState& state, const Point& x) {
  return uhat_at(state, x, state.partition.owners(x));
}

double relaxed_update(double old_value, double hat_value, double tau,
                      int multiplicity) {
  const double w = tau * static_cast<double>(multiplicity);
  return (1.0 - w) * old_value + w * hat_value;
}

void outer_iterate(SchwarzState& state, int jobs) {
  const int n = state.partition.count();
  const bool two_level = state.config.level == Level::two;

  // All solves read the frozen table; nets are committed only afterwards.
  std::vector<TrainResult> results(static_cast<std::size_t>(n));
  TrainResult coarse_result;
  const int tasks = n + (two_level ? 1 : 0);
  parallel_for(tasks, jobs, [&](int t) {
    if (t < n)
      results[static_cast<std::size_t>(t)] = local_solve(state, t);
    else
      coarse_result = coarse_solve(state);
  });

  for (int i = 0; i < n; ++i) {
    auto& res = results[static_cast<std::size_t>(i)];
    state.local_nets[static_cast<std::size_t>(i)] = std::move(res.net);
    state.last_local_loss[static_cast<std::size_t>(i)] = res.loss_history.back();
  }
  if (two_level) {
    state.coarse_net = std::move(coarse_result.net);
    state.last_coarse_loss = coarse_result.loss_history.back();
  }

  const double tau = state.config.tau;
  for (auto& entries : state.table.boundary) {
    for (TableEntry& e : entries) {
      if (e.pinned) continue;  // outer boundary keeps the exact Dirichlet value
      const double hat = uhat_at(state, e.x, e.owners);
      e.value = relaxed_update(e.value, hat, tau, static_cast<int>(e.owners.size()));
    }
  }
  if (two_level) {
    for (TableEntry& e : state.table.coarse) {
      double hat = laplacian(state.coarse_net, e.x);
      for (int i : e.owners)
        hat += laplacian(state.local_nets[static_cast<std::size_t>(i)], e.x);
      hat /= static_cast<double>(e.owners.size());
      e.value = relaxed_update(e.value, hat, tau, static_cast<int>(e.owners.size()));
    }
  }

  state.table.iteration += 1;
}

namespace {

double mean_local_loss(const SchwarzState& state) {
  double sum = 0.0;
  for (double v : state.last_local_loss) sum += v;
  return sum / static_cast<double>(state.last_local_loss.size());
}

}  // namespace

RunReport run(const PoissonProblem& problem, const OverlapPartition& partition,
              const TrainingSets& sets, const SchwarzConfig& config,
              std::uint64_t seed, int jobs) {
  const auto t0 = std::chrono::steady_clock::now();

  RunReport report;
  report.state = init_state(problem, partition, sets, config, seed);
  SchwarzState& state = report.state;

  const EvalGrid grid = make_eval_grid(problem, partition, config.eval_grid);
  std::vector<double> uhat_values(grid.points.size());
  auto fill_uhat = [&]() {
    for (std::size_t p = 0; p < grid.points.size(); ++p)
      uhat_values[p] = uhat_at(state, grid.points[p], grid.owners[p]);
  };
  auto rel_error = [&]() {
    double err2 = 0.0;
    for (std::size_t p = 0; p < grid.points.size(); ++p) {
      const double d = uhat_values[p] - grid.exact[p];
      err2 += grid.weights[p] * d * d;
    }
    return std::sqrt(err2) / grid.exact_norm;
  };

  // losses of the untouched nets, so the initial record is complete
  for (int i = 0; i < partition.count(); ++i)
    state.last_local_loss[static_cast<std::size_t>(i)] =
        loss_value(state.local_nets[static_cast<std::size_t>(i)], make_local_batch(state, i));
  if (config.level == Level::two)
    state.last_coarse_loss = loss_value(state.coarse_net, make_coarse_batch(state));

  fill_uhat();
  report.history.push_back({0, rel_error(), mean_local_loss(state),
                            config.level == Level::two
                                ? state.last_coarse_loss
                                : std::numeric_limits<double>::quiet_NaN()});

  std::vector<double> prev_uhat = uhat_values;
  for (int it = 1; it <= config.max_outer; ++it) {
    outer_iterate(state, jobs);
    fill_uhat();
    report.history.push_back({it, rel_error(), mean_local_loss(state),
                              config.level == Level::two
                                  ? state.last_coarse_loss
                                  : std::numeric_limits<double>::quiet_NaN()});

    if (config.stop_tol > 0.0) {
      double diff2 = 0.0, norm2 = 0.0;
      for (std::size_t p = 0; p < uhat_values.size(); ++p) {
        const double d = uhat_values[p] - prev_uhat[p];
        diff2 += grid.weights[p] * d * d;
        norm2 += grid.weights[p] * uhat_values[p] * uhat_values[p];
      }
      const double change =
          std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-300);
      if (change < config.stop_tol) break;
    }
    prev_uhat = uhat_values;
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

double relative_l2_error(const std::function<double(const Point&)>& uhat,
                         const PoissonProblem& problem, int grid_per_axis) {
  if (!problem.exact)
    throw ContractError("relative_l2_error: problem has no exact solution");
  if (grid_per_axis <= 0) grid_per_axis = default_grid(problem.dim);

  // partition-free variant of the grid above
  OverlapPartition trivial;
  trivial.domain = problem.domain;
  trivial.dim = problem.dim;
  trivial.boxes = {problem.domain};
  const EvalGrid grid = make_eval_grid(problem, trivial, grid_per_axis);

  double err2 = 0.0;
  for (std::size_t p = 0; p < grid.points.size(); ++p) {
    const double d = uhat(grid.points[p]) - grid.exact[p];
    err2 += grid.weights[p] * d * d;
  }
  return std::sqrt(err2) / grid.exact_norm;
}

double relative_l2_error(const SchwarzState& state, int grid_per_axis) {
  return relative_l2_error(
      [&state](const Point& x) { return evaluate_uhat(state, x); },
      state.problem, grid_per_axis);
}

}  // namespace aspinn
