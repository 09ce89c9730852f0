#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "aspinn/adam.hpp"
#include "aspinn/net.hpp"
#include "aspinn/partition.hpp"
#include "aspinn/problems.hpp"

namespace aspinn {

enum class Level { one, two };

struct SchwarzConfig {
  Level level = Level::one;
  double tau = 0.5;          // relaxation weight; must satisfy 0 < tau*Nc <= 1
  int max_outer = 50;
  int epochs_per_solve = 10000;
  int coarse_epochs = 10000;
  int local_width = 35;
  int coarse_width = 35;
  bool warm_start = true;    // reuse each net across outer iterations
  int eval_grid = 0;         // points per axis; 0 = 1001 (1D) / 101 (2D)
  double stop_tol = 0.0;     // early stop on relative change of the combined
                             // solution between iterations; 0 disables
};

// Tabulated iterate value at one collocation point. `owners` caches the
// subdomain indices sharing the point; entries pinned to the outer boundary
// keep the exact Dirichlet value forever.
struct TableEntry {
  Point x{0.0, 0.0};
  std::vector<int> owners;
  bool pinned = false;
  double value = 0.0;
};

// Values of the current iterate at the stored data points. Only these values
// cross outer iterations; no historical network parameters are kept.
struct IterateTable {
  std::vector<std::vector<TableEntry>> boundary;  // aligned with TrainingSets::boundary
  std::vector<TableEntry> coarse;                 // iterate Laplacian at coarse
                                                  // interior points (two-level)
  int iteration = 0;
};

struct SchwarzState {
  PoissonProblem problem;
  OverlapPartition partition;
  TrainingSets sets;
  SchwarzConfig config;
  std::uint64_t seed = 0;

  std::vector<MlpNet> local_nets;
  MlpNet coarse_net;  // two-level only
  IterateTable table;

  // rhs values cached once; the point sets never change during a run
  std::vector<std::vector<double>> local_f;
  std::vector<double> coarse_f;

  std::vector<double> last_local_loss;  // final training loss per subdomain
  double last_coarse_loss = 0.0;
};

SchwarzState init_state(const PoissonProblem& problem,
                        const OverlapPartition& partition,
                        const TrainingSets& sets, const SchwarzConfig& config,
                        std::uint64_t seed);

// Training problem for subdomain i against the current table values.
CollocationBatch make_local_batch(const SchwarzState& state, int i);
// Coarse correction problem: rhs f + (tabulated iterate Laplacian), zero
// boundary values. Two-level only.
CollocationBatch make_coarse_batch(const SchwarzState& state);

TrainResult local_solve(const SchwarzState& state, int i);
TrainResult coarse_solve(const SchwarzState& state);

// Combined solution: the average of the owning subdomain nets at x, plus the
// coarse net inside the average in two-level mode.
double evaluate_uhat(const SchwarzState& state, const Point& x);

// Relaxed pointwise update shared by the value and Laplacian tables:
//   new = (1 - tau*m) * old + tau*m * hat,  m = |owners|.
double relaxed_update(double old_value, double hat_value, double tau, int multiplicity);

// One outer iteration: solve all local problems (and the coarse problem)
// against the frozen table, then refresh the table from the new nets.
// Local solves are independent; `jobs` threads never change the result.
void outer_iterate(SchwarzState& state, int jobs = 1);

struct IterationRecord {
  int iter = 0;
  double rel_l2 = 0.0;
  double mean_local_loss = 0.0;
  double coarse_loss = 0.0;  // NaN in one-level mode
};

struct RunReport {
  std::vector<IterationRecord> history;  // entry 0 is the initial state
  double wall_seconds = 0.0;
  SchwarzState state;
};

RunReport run(const PoissonProblem& problem, const OverlapPartition& partition,
              const TrainingSets& sets, const SchwarzConfig& config,
              std::uint64_t seed, int jobs = 1);

// || uhat - exact || / || exact || by trapezoid quadrature on a uniform grid
// with `grid_per_axis` points per axis (0 = 1001 in 1D, 101 in 2D).
double relative_l2_error(const std::function<double(const Point&)>& uhat,
                         const PoissonProblem& problem, int grid_per_axis = 0);
double relative_l2_error(const SchwarzState& state, int grid_per_axis = 0);

}  // namespace aspinn
