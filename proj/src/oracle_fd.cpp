#include "aspinn/oracle_fd.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <memory>

#include "aspinn/errors.hpp"

namespace aspinn {

namespace {

// Tridiagonal solve with constant coefficients (Thomas algorithm):
// diag * u_j + off * (u_{j-1} + u_{j+1}) = rhs_j.
std::vector<double> solve_tridiag(double diag, double off, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> c(n, 0.0);
  std::vector<double> u(n, 0.0);
  double beta = diag;
  u[0] = rhs[0] / beta;
  for (std::size_t j = 1; j < n; ++j) {
    c[j] = off / beta;
    beta = diag - off * c[j];
    u[j] = (rhs[j] - off * u[j - 1]) / beta;
  }
  for (std::size_t j = n - 1; j-- > 0;) u[j] -= c[j + 1] * u[j + 1];
  return u;
}

}  // namespace

FdGrid make_grid(const Box& domain, int nodes_per_axis) {
  if (nodes_per_axis < 3) throw ConfigError("make_grid: need at least 3 nodes per axis");
  FdGrid g;
  g.dim = domain.dim;
  g.nodes = nodes_per_axis;
  g.domain = domain;
  g.hx = domain.side(0) / (nodes_per_axis - 1);
  g.hy = g.dim == 2 ? domain.side(1) / (nodes_per_axis - 1) : 0.0;
  return g;
}

std::vector<double> fd_solve(const PoissonProblem& problem, const FdGrid& grid) {
  if (problem.dim != grid.dim) throw ContractError("fd_solve: dimension mismatch");
  const int m = grid.nodes;
  std::vector<double> u(grid.size(), 0.0);

  if (grid.dim == 1) {
    u[0] = problem.g(grid.node(0));
    u[grid.size() - 1] = problem.g(grid.node(m - 1));
    const double ih2 = 1.0 / (grid.hx * grid.hx);
    std::vector<double> rhs(static_cast<std::size_t>(m - 2));
    for (int i = 1; i < m - 1; ++i) rhs[static_cast<std::size_t>(i - 1)] = problem.f(grid.node(i));
    rhs.front() += u[0] * ih2;
    rhs.back() += u[grid.size() - 1] * ih2;
    const auto inner = solve_tridiag(2.0 * ih2, -ih2, std::move(rhs));
    for (int i = 1; i < m - 1; ++i) u[static_cast<std::size_t>(i)] = inner[static_cast<std::size_t>(i - 1)];
    return u;
  }

  const double ihx2 = 1.0 / (grid.hx * grid.hx);
  const double ihy2 = 1.0 / (grid.hy * grid.hy);
  const int inner_n = m - 2;
  auto inner_index = [inner_n](int ix, int iy) {
    return (iy - 1) * inner_n + (ix - 1);
  };

  for (int iy = 0; iy < m; ++iy)
    for (int ix = 0; ix < m; ++ix)
      if (grid.on_boundary(ix, iy)) u[grid.index(ix, iy)] = problem.g(grid.node(ix, iy));

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(inner_n) * inner_n * 5);
  Eigen::VectorXd rhs(inner_n * inner_n);
  for (int iy = 1; iy < m - 1; ++iy) {
    for (int ix = 1; ix < m - 1; ++ix) {
      const int row = inner_index(ix, iy);
      double b = problem.f(grid.node(ix, iy));
      trips.emplace_back(row, row, 2.0 * ihx2 + 2.0 * ihy2);
      if (ix > 1) trips.emplace_back(row, inner_index(ix - 1, iy), -ihx2);
      else b += ihx2 * u[grid.index(ix - 1, iy)];
      if (ix < m - 2) trips.emplace_back(row, inner_index(ix + 1, iy), -ihx2);
      else b += ihx2 * u[grid.index(ix + 1, iy)];
      if (iy > 1) trips.emplace_back(row, inner_index(ix, iy - 1), -ihy2);
      else b += ihy2 * u[grid.index(ix, iy - 1)];
      if (iy < m - 2) trips.emplace_back(row, inner_index(ix, iy + 1), -ihy2);
      else b += ihy2 * u[grid.index(ix, iy + 1)];
      rhs[row] = b;
    }
  }

  Eigen::SparseMatrix<double> A(inner_n * inner_n, inner_n * inner_n);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("fd_solve: factorization failed");
  const Eigen::VectorXd sol = solver.solve(rhs);

  for (int iy = 1; iy < m - 1; ++iy)
    for (int ix = 1; ix < m - 1; ++ix)
      u[grid.index(ix, iy)] = sol[inner_index(ix, iy)];
  return u;
}

double fd_residual(const PoissonProblem& problem, const FdGrid& grid,
                   const std::vector<double>& values) {
  const int m = grid.nodes;
  double worst = 0.0;
  if (grid.dim == 1) {
    const double ih2 = 1.0 / (grid.hx * grid.hx);
    for (int i = 1; i < m - 1; ++i) {
      const double lap = (values[grid.index(i - 1)] - 2.0 * values[grid.index(i)] +
                          values[grid.index(i + 1)]) * ih2;
      worst = std::max(worst, std::abs(lap + problem.f(grid.node(i))));
    }
    return worst;
  }
  const double ihx2 = 1.0 / (grid.hx * grid.hx);
  const double ihy2 = 1.0 / (grid.hy * grid.hy);
  for (int iy = 1; iy < m - 1; ++iy)
    for (int ix = 1; ix < m - 1; ++ix) {
      const double lap =
          (values[grid.index(ix - 1, iy)] - 2.0 * values[grid.index(ix, iy)] +
           values[grid.index(ix + 1, iy)]) * ihx2 +
          (values[grid.index(ix, iy - 1)] - 2.0 * values[grid.index(ix, iy)] +
           values[grid.index(ix, iy + 1)]) * ihy2;
      worst = std::max(worst, std::abs(lap + problem.f(grid.node(ix, iy))));
    }
  return worst;
}

double discrete_energy_norm(const FdGrid& grid, const std::vector<double>& values) {
  if (values.size() != grid.size())
    throw ContractError("discrete_energy_norm: size mismatch");
  const int m = grid.nodes;
  double acc = 0.0;
  if (grid.dim == 1) {
    for (int i = 0; i + 1 < m; ++i) {
      const double d = values[grid.index(i + 1)] - values[grid.index(i)];
      acc += d * d / grid.hx;
    }
    return std::sqrt(acc);
  }
  const double wx = grid.hy / grid.hx;
  const double wy = grid.hx / grid.hy;
  for (int iy = 0; iy < m; ++iy)
    for (int ix = 0; ix + 1 < m; ++ix) {
      const double d = values[grid.index(ix + 1, iy)] - values[grid.index(ix, iy)];
      acc += wx * d * d;
    }
  for (int iy = 0; iy + 1 < m; ++iy)
    for (int ix = 0; ix < m; ++ix) {
      const double d = values[grid.index(ix, iy + 1)] - values[grid.index(ix, iy)];
      acc += wy * d * d;
    }
  return std::sqrt(acc);
}

namespace {

int snap(double coord, double lo, double h, int nodes) {
  const int idx = static_cast<int>(std::lround((coord - lo) / h));
  return std::clamp(idx, 0, nodes - 1);
}

struct SubdomainRange {
  int x0, x1, y0, y1;  // inclusive node ranges of the snapped box
};

// Exact solver for one subdomain; assembled and factored once.
class SubdomainSolver {
 public:
  SubdomainSolver(const FdGrid& grid, const SubdomainRange& r,
                  const std::vector<double>& f_nodes)
      : grid_(grid), r_(r), f_nodes_(f_nodes) {
    if (grid.dim == 2) {
      nx_ = r.x1 - r.x0 - 1;
      ny_ = r.y1 - r.y0 - 1;
      const double ihx2 = 1.0 / (grid.hx * grid.hx);
      const double ihy2 = 1.0 / (grid.hy * grid.hy);
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(static_cast<std::size_t>(nx_) * ny_ * 5);
      for (int jy = 0; jy < ny_; ++jy)
        for (int jx = 0; jx < nx_; ++jx) {
          const int row = jy * nx_ + jx;
          trips.emplace_back(row, row, 2.0 * ihx2 + 2.0 * ihy2);
          if (jx > 0) trips.emplace_back(row, row - 1, -ihx2);
          if (jx < nx_ - 1) trips.emplace_back(row, row + 1, -ihx2);
          if (jy > 0) trips.emplace_back(row, row - nx_, -ihy2);
          if (jy < ny_ - 1) trips.emplace_back(row, row + nx_, -ihy2);
        }
      Eigen::SparseMatrix<double> A(nx_ * ny_, nx_ * ny_);
      A.setFromTriplets(trips.begin(), trips.end());
      llt_.compute(A);
      if (llt_.info() != Eigen::Success)
        throw std::runtime_error("subdomain factorization failed");
    }
  }

  // Adds tau * (local solution - iterate) on the subdomain interior.
  void accumulate_correction(const std::vector<double>& u, double tau,
                             std::vector<double>& out) const {
    if (grid_.dim == 1) {
      const double ih2 = 1.0 / (grid_.hx * grid_.hx);
      const int n = r_.x1 - r_.x0 - 1;
      std::vector<double> rhs(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        rhs[static_cast<std::size_t>(j)] = f_nodes_[grid_.index(r_.x0 + 1 + j)];
      rhs.front() += ih2 * u[grid_.index(r_.x0)];
      rhs.back() += ih2 * u[grid_.index(r_.x1)];
      const auto local = solve_tridiag(2.0 * ih2, -ih2, std::move(rhs));
      for (int j = 0; j < n; ++j) {
        const std::size_t id = grid_.index(r_.x0 + 1 + j);
        out[id] += tau * (local[static_cast<std::size_t>(j)] - u[id]);
      }
      return;
    }

    const double ihx2 = 1.0 / (grid_.hx * grid_.hx);
    const double ihy2 = 1.0 / (grid_.hy * grid_.hy);
    Eigen::VectorXd rhs(nx_ * ny_);
    for (int jy = 0; jy < ny_; ++jy)
      for (int jx = 0; jx < nx_; ++jx) {
        const int ix = r_.x0 + 1 + jx;
        const int iy = r_.y0 + 1 + jy;
        double b = f_nodes_[grid_.index(ix, iy)];
        if (jx == 0) b += ihx2 * u[grid_.index(ix - 1, iy)];
        if (jx == nx_ - 1) b += ihx2 * u[grid_.index(ix + 1, iy)];
        if (jy == 0) b += ihy2 * u[grid_.index(ix, iy - 1)];
        if (jy == ny_ - 1) b += ihy2 * u[grid_.index(ix, iy + 1)];
        rhs[jy * nx_ + jx] = b;
      }
    const Eigen::VectorXd local = llt_.solve(rhs);
    for (int jy = 0; jy < ny_; ++jy)
      for (int jx = 0; jx < nx_; ++jx) {
        const std::size_t id = grid_.index(r_.x0 + 1 + jx, r_.y0 + 1 + jy);
        out[id] += tau * (local[jy * nx_ + jx] - u[id]);
      }
  }

 private:
  const FdGrid& grid_;
  SubdomainRange r_;
  const std::vector<double>& f_nodes_;
  int nx_ = 0, ny_ = 0;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

// Coarse correction in the space of (bi)linear hat functions on a uniform
// coarse grid. The coarse operator is the Galerkin product P^T A P with P the
// (bi)linear prolongation, so the correction is the energy-orthogonal
// projection of the error onto the coarse space. Pointwise sampling of the
// fine residual is not used: the iterate's discrete Laplacian carries 1/h
// spikes along subdomain interfaces, and sampling them aliases into the
// coarse problem and diverges.
class CoarseSolver {
 public:
  CoarseSolver(const FdGrid& fine, int coarse_nodes)
      : fine_(fine), coarse_(make_grid(fine.domain, coarse_nodes)) {
    const int nf = interior_count(fine_);
    const int nc = interior_count(coarse_);

    Eigen::SparseMatrix<double> A(nf, nf);
    {
      std::vector<Eigen::Triplet<double>> trips;
      if (fine_.dim == 1) {
        const double ih2 = 1.0 / (fine_.hx * fine_.hx);
        for (int i = 0; i < nf; ++i) {
          trips.emplace_back(i, i, 2.0 * ih2);
          if (i > 0) trips.emplace_back(i, i - 1, -ih2);
          if (i < nf - 1) trips.emplace_back(i, i + 1, -ih2);
        }
      } else {
        const int n = fine_.nodes - 2;
        const double ihx2 = 1.0 / (fine_.hx * fine_.hx);
        const double ihy2 = 1.0 / (fine_.hy * fine_.hy);
        for (int jy = 0; jy < n; ++jy)
          for (int jx = 0; jx < n; ++jx) {
            const int row = jy * n + jx;
            trips.emplace_back(row, row, 2.0 * ihx2 + 2.0 * ihy2);
            if (jx > 0) trips.emplace_back(row, row - 1, -ihx2);
            if (jx < n - 1) trips.emplace_back(row, row + 1, -ihx2);
            if (jy > 0) trips.emplace_back(row, row - n, -ihy2);
            if (jy < n - 1) trips.emplace_back(row, row + n, -ihy2);
          }
      }
      A.setFromTriplets(trips.begin(), trips.end());
    }

    // prolongation from coarse interior nodes to fine interior nodes
    prolong_.resize(nf, nc);
    {
      std::vector<Eigen::Triplet<double>> trips;
      auto add_node = [&](int row, const Point& p) {
        int ix;
        double tx;
        locate(p[0], coarse_.domain.lo[0], coarse_.hx, coarse_.nodes, ix, tx);
        if (fine_.dim == 1) {
          push_weight(trips, row, ix, 1.0 - tx);
          push_weight(trips, row, ix + 1, tx);
          return;
        }
        int iy;
        double ty;
        locate(p[1], coarse_.domain.lo[1], coarse_.hy, coarse_.nodes, iy, ty);
        push_weight2(trips, row, ix, iy, (1.0 - tx) * (1.0 - ty));
        push_weight2(trips, row, ix + 1, iy, tx * (1.0 - ty));
        push_weight2(trips, row, ix, iy + 1, (1.0 - tx) * ty);
        push_weight2(trips, row, ix + 1, iy + 1, tx * ty);
      };
      if (fine_.dim == 1) {
        for (int i = 1; i < fine_.nodes - 1; ++i) add_node(i - 1, fine_.node(i));
      } else {
        const int n = fine_.nodes - 2;
        for (int iy = 1; iy < fine_.nodes - 1; ++iy)
          for (int ix = 1; ix < fine_.nodes - 1; ++ix)
            add_node((iy - 1) * n + (ix - 1), fine_.node(ix, iy));
      }
      prolong_.setFromTriplets(trips.begin(), trips.end());
    }

    Eigen::SparseMatrix<double> Ac = prolong_.transpose() * A * prolong_;
    llt_.compute(Ac);
    if (llt_.info() != Eigen::Success)
      throw std::runtime_error("coarse factorization failed");
  }

  // residual (full-grid layout) -> coarse Galerkin solve -> prolongation,
  // scaled by tau, added to out
  void accumulate_correction(const std::vector<double>& residual, double tau,
                             std::vector<double>& out) const {
    const int nf = static_cast<int>(prolong_.rows());
    Eigen::VectorXd r(nf);
    if (fine_.dim == 1) {
      for (int i = 1; i < fine_.nodes - 1; ++i) r[i - 1] = residual[fine_.index(i)];
    } else {
      const int n = fine_.nodes - 2;
      for (int iy = 1; iy < fine_.nodes - 1; ++iy)
        for (int ix = 1; ix < fine_.nodes - 1; ++ix)
          r[(iy - 1) * n + (ix - 1)] = residual[fine_.index(ix, iy)];
    }
    // w = P (P^T A P)^{-1} P^T (b - A u): the A-orthogonal projection of the
    // current error onto the coarse space
    const Eigen::VectorXd w = prolong_ * llt_.solve(prolong_.transpose() * r);
    if (fine_.dim == 1) {
      for (int i = 1; i < fine_.nodes - 1; ++i) out[fine_.index(i)] += tau * w[i - 1];
    } else {
      const int n = fine_.nodes - 2;
      for (int iy = 1; iy < fine_.nodes - 1; ++iy)
        for (int ix = 1; ix < fine_.nodes - 1; ++ix)
          out[fine_.index(ix, iy)] += tau * w[(iy - 1) * n + (ix - 1)];
    }
  }

 private:
  static int interior_count(const FdGrid& g) {
    const int n = g.nodes - 2;
    return g.dim == 1 ? n : n * n;
  }

  static void locate(double coord, double lo, double h, int nodes, int& i0,
                     double& t) {
    double s = (coord - lo) / h;
    s = std::clamp(s, 0.0, static_cast<double>(nodes - 1));
    i0 = std::min(static_cast<int>(s), nodes - 2);
    t = s - i0;
  }

  // 1D: coarse node k maps to interior column k-1; boundary nodes drop out
  void push_weight(std::vector<Eigen::Triplet<double>>& trips, int row, int k,
                   double w) const {
    if (w == 0.0 || k <= 0 || k >= coarse_.nodes - 1) return;
    trips.emplace_back(row, k - 1, w);
  }
  void push_weight2(std::vector<Eigen::Triplet<double>>& trips, int row, int kx,
                    int ky, double w) const {
    if (w == 0.0 || kx <= 0 || kx >= coarse_.nodes - 1 || ky <= 0 ||
        ky >= coarse_.nodes - 1)
      return;
    trips.emplace_back(row, (ky - 1) * (coarse_.nodes - 2) + (kx - 1), w);
  }

  const FdGrid& fine_;
  FdGrid coarse_;
  Eigen::SparseMatrix<double> prolong_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

}  // namespace

OracleHistory fd_schwarz_run(const PoissonProblem& problem,
                             const OverlapPartition& partition,
                             const FdGrid& grid, double tau, int iterations,
                             Level level, int coarse_nodes) {
  if (problem.dim != grid.dim || partition.dim != grid.dim)
    throw ContractError("fd_schwarz_run: dimension mismatch");
  if (tau < 0.0 || tau * partition.Nc > 1.0 + 1e-12)
    throw ConfigError("fd_schwarz_run: tau must satisfy 0 <= tau*Nc <= 1");
  if (iterations < 0) throw ConfigError("fd_schwarz_run: iterations must be >= 0");

  // snap subdomains to the grid
  std::vector<SubdomainRange> ranges;
  ranges.reserve(partition.boxes.size());
  for (const Box& b : partition.boxes) {
    SubdomainRange r;
    r.x0 = snap(b.lo[0], grid.domain.lo[0], grid.hx, grid.nodes);
    r.x1 = snap(b.hi[0], grid.domain.lo[0], grid.hx, grid.nodes);
    r.y0 = grid.dim == 2 ? snap(b.lo[1], grid.domain.lo[1], grid.hy, grid.nodes) : 0;
    r.y1 = grid.dim == 2 ? snap(b.hi[1], grid.domain.lo[1], grid.hy, grid.nodes) : 0;
    if (r.x1 - r.x0 < 2 || (grid.dim == 2 && r.y1 - r.y0 < 2))
      throw ConfigError("fd_schwarz_run: a subdomain has no interior grid nodes");
    ranges.push_back(r);
  }
  // overlap of axis-neighbors must survive the snapping
  const int n_axis = partition.per_axis;
  auto check_overlap = [](int hi_prev, int lo_next) {
    if (hi_prev <= lo_next)
      throw ConfigError("fd_schwarz_run: partition overlap vanishes on the grid");
  };
  if (grid.dim == 1) {
    for (int i = 0; i + 1 < n_axis; ++i)
      check_overlap(ranges[static_cast<std::size_t>(i)].x1,
                    ranges[static_cast<std::size_t>(i + 1)].x0);
  } else {
    for (int iy = 0; iy < n_axis; ++iy)
      for (int ix = 0; ix + 1 < n_axis; ++ix)
        check_overlap(ranges[static_cast<std::size_t>(iy * n_axis + ix)].x1,
                      ranges[static_cast<std::size_t>(iy * n_axis + ix + 1)].x0);
    for (int iy = 0; iy + 1 < n_axis; ++iy)
      for (int ix = 0; ix < n_axis; ++ix)
        check_overlap(ranges[static_cast<std::size_t>(iy * n_axis + ix)].y1,
                      ranges[static_cast<std::size_t>((iy + 1) * n_axis + ix)].y0);
  }

  std::vector<double> f_nodes(grid.size());
  if (grid.dim == 1) {
    for (int i = 0; i < grid.nodes; ++i) f_nodes[grid.index(i)] = problem.f(grid.node(i));
  } else {
    for (int iy = 0; iy < grid.nodes; ++iy)
      for (int ix = 0; ix < grid.nodes; ++ix)
        f_nodes[grid.index(ix, iy)] = problem.f(grid.node(ix, iy));
  }

  std::vector<std::unique_ptr<SubdomainSolver>> solvers;
  solvers.reserve(ranges.size());
  for (const SubdomainRange& r : ranges)
    solvers.push_back(std::make_unique<SubdomainSolver>(grid, r, f_nodes));

  std::unique_ptr<CoarseSolver> coarse;
  if (level == Level::two) {
    const int cn = coarse_nodes > 0 ? coarse_nodes : partition.per_axis + 2;
    if (cn < 3) throw ConfigError("fd_schwarz_run: coarse grid needs >= 3 nodes per axis");
    coarse = std::make_unique<CoarseSolver>(grid, cn);
  }

  const std::vector<double> reference = fd_solve(problem, grid);

  // initial iterate: Dirichlet data on the boundary, zero inside
  std::vector<double> u(grid.size(), 0.0);
  if (grid.dim == 1) {
    u[grid.index(0)] = problem.g(grid.node(0));
    u[grid.index(grid.nodes - 1)] = problem.g(grid.node(grid.nodes - 1));
  } else {
    for (int iy = 0; iy < grid.nodes; ++iy)
      for (int ix = 0; ix < grid.nodes; ++ix)
        if (grid.on_boundary(ix, iy)) u[grid.index(ix, iy)] = problem.g(grid.node(ix, iy));
  }

  OracleHistory history;
  std::vector<double> err(grid.size());
  auto record = [&]() {
    for (std::size_t i = 0; i < u.size(); ++i) err[i] = reference[i] - u[i];
    history.energy_error.push_back(discrete_energy_norm(grid, err));
  };
  record();

  std::vector<double> update(grid.size());
  std::vector<double> residual(grid.size());
  for (int it = 0; it < iterations; ++it) {
    std::fill(update.begin(), update.end(), 0.0);
    for (const auto& s : solvers) s->accumulate_correction(u, tau, update);

    if (coarse) {
      std::fill(residual.begin(), residual.end(), 0.0);
      if (grid.dim == 1) {
        const double ih2 = 1.0 / (grid.hx * grid.hx);
        for (int i = 1; i < grid.nodes - 1; ++i)
          residual[grid.index(i)] =
              f_nodes[grid.index(i)] +
              (u[grid.index(i - 1)] - 2.0 * u[grid.index(i)] + u[grid.index(i + 1)]) * ih2;
      } else {
        const double ihx2 = 1.0 / (grid.hx * grid.hx);
        const double ihy2 = 1.0 / (grid.hy * grid.hy);
        for (int iy = 1; iy < grid.nodes - 1; ++iy)
          for (int ix = 1; ix < grid.nodes - 1; ++ix)
            residual[grid.index(ix, iy)] =
                f_nodes[grid.index(ix, iy)] +
                (u[grid.index(ix - 1, iy)] - 2.0 * u[grid.index(ix, iy)] +
                 u[grid.index(ix + 1, iy)]) * ihx2 +
                (u[grid.index(ix, iy - 1)] - 2.0 * u[grid.index(ix, iy)] +
                 u[grid.index(ix, iy + 1)]) * ihy2;
      }
      coarse->accumulate_correction(residual, tau, update);
    }

    for (std::size_t i = 0; i < u.size(); ++i) u[i] += update[i];
    record();
  }

  history.ratio.reserve(history.energy_error.size());
  for (std::size_t i = 0; i + 1 < history.energy_error.size(); ++i)
    history.ratio.push_back(history.energy_error[i + 1] /
                            std::max(history.energy_error[i], 1e-300));
  return history;
}

double asymptotic_ratio(const OracleHistory& history, int tail) {
  if (history.ratio.empty())
    throw ContractError("asymptotic_ratio: empty ratio history");
  const int n = static_cast<int>(history.ratio.size());
  const int k = std::max(1, std::min(tail, n));
  double log_sum = 0.0;
  for (int i = n - k; i < n; ++i)
    log_sum += std::log(std::max(history.ratio[static_cast<std::size_t>(i)], 1e-300));
  return std::exp(log_sum / k);
}

double rate_bound(const RateBound& bound) {
  if (!(bound.C0 > 0.0)) throw ConfigError("rate_bound: C0 must be > 0");
  if (bound.Nc < 1) throw ConfigError("rate_bound: Nc must be >= 1");
  const double nc = static_cast<double>(bound.Nc);
  return 1.0 - 2.0 * bound.tau / (2.0 + bound.C0) + nc * nc * bound.tau * bound.tau;
}

OptimalTau optimal_tau(double C0, int Nc) {
  if (!(C0 > 0.0)) throw ConfigError("optimal_tau: C0 must be > 0");
  if (Nc < 1) throw ConfigError("optimal_tau: Nc must be >= 1");
  const double nc2 = static_cast<double>(Nc) * Nc;
  const double denom = 2.0 + C0;
  OptimalTau out;
  out.tau = 1.0 / (nc2 * denom);
  out.min_rate = 1.0 - 1.0 / (nc2 * denom * denom);
  return out;
}

std::optional<double> fit_c0(double observed_ratio, double tau, int Nc) {
  if (!(tau > 0.0) || Nc < 1) return std::nullopt;
  const double nc2 = static_cast<double>(Nc) * Nc;
  const double gap = 1.0 + nc2 * tau * tau - observed_ratio;
  if (!(gap > 0.0)) return std::nullopt;
  const double c0 = 2.0 * tau / gap - 2.0;
  if (!(c0 > 0.0)) return std::nullopt;
  return c0;
}

}  // namespace aspinn
