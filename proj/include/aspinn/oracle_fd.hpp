#pragma once

#include <optional>
#include <vector>

#include "aspinn/partition.hpp"
#include "aspinn/problems.hpp"
#include "aspinn/schwarz.hpp"

namespace aspinn {

// Uniform tensor grid over the problem domain; the same node count on every
// axis. Nodes on the domain boundary carry Dirichlet data.
struct FdGrid {
  int dim = 1;
  int nodes = 0;   // per axis
  double hx = 0.0;
  double hy = 0.0;
  Box domain;

  Point node(int ix, int iy = 0) const {
    return {domain.lo[0] + ix * hx, dim == 2 ? domain.lo[1] + iy * hy : 0.0};
  }
  std::size_t index(int ix, int iy = 0) const {
    return static_cast<std::size_t>(iy) * nodes + ix;
  }
  std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(nodes)
                    : static_cast<std::size_t>(nodes) * nodes;
  }
  bool on_boundary(int ix, int iy = 0) const {
    if (ix == 0 || ix == nodes - 1) return true;
    return dim == 2 && (iy == 0 || iy == nodes - 1);
  }
};

FdGrid make_grid(const Box& domain, int nodes_per_axis);

// Direct solve of the 3-point (1D) / 5-point (2D) Dirichlet system; returns
// nodal values including the boundary.
std::vector<double> fd_solve(const PoissonProblem& problem, const FdGrid& grid);

// Max-norm residual of the discrete system at the given nodal values.
double fd_residual(const PoissonProblem& problem, const FdGrid& grid,
                   const std::vector<double>& values);

// sqrt of the h-weighted sum of squared forward differences.
double discrete_energy_norm(const FdGrid& grid, const std::vector<double>& values);

struct OracleHistory {
  std::vector<double> energy_error;  // per iteration, entry 0 = initial
  std::vector<double> ratio;         // ratio[i] = energy_error[i+1] / energy_error[i]
};

// Schwarz iteration with exact subdomain solves on the grid. Subdomain edges
// snap to the nearest nodes; a partition whose overlap vanishes on the grid
// is rejected. Two-level mode adds a coarse-grid correction driven by the
// fine-grid residual, restricted and prolonged (bi)linearly; coarse_nodes <= 0
// picks one interior coarse node per subdomain. tau == 0 is accepted as a
// diagnostic no-op.
OracleHistory fd_schwarz_run(const PoissonProblem& problem,
                             const OverlapPartition& partition,
                             const FdGrid& grid, double tau, int iterations,
                             Level level, int coarse_nodes = 0);

// Geometric mean of the trailing `tail` per-iteration ratios.
double asymptotic_ratio(const OracleHistory& history, int tail = 10);

struct RateBound {
  double C0 = 1.0;
  int Nc = 1;
  double tau = 0.0;
};

// Per-iteration energy error reduction bound 1 - 2 tau/(2+C0) + Nc^2 tau^2.
double rate_bound(const RateBound& bound);

struct OptimalTau {
  double tau = 0.0;
  double min_rate = 0.0;
};

// Minimizer of the bound: tau* = 1/(Nc^2 (2+C0)),
// R(tau*) = 1 - 1/(Nc^2 (2+C0)^2).
OptimalTau optimal_tau(double C0, int Nc);

// Diagnostic inverse: the C0 > 0 for which the bound equals the observed
// ratio at this tau, when such a constant exists.
std::optional<double> fit_c0(double observed_ratio, double tau, int Nc);

}  // namespace aspinn
