#pragma once

#include <cstdint>
#include <vector>

#include "aspinn/geometry.hpp"
#include "aspinn/problems.hpp"

namespace aspinn {

// Uniform overlapping box partition. Cells of width H = side/N are extended
// by delta/2 on every interior side and clipped at the domain boundary; in 2D
// the boxes are the tensor product of the per-axis intervals, indexed as
// k = iy*N + ix.
struct OverlapPartition {
  Box domain;
  int dim = 1;
  int per_axis = 1;
  double H = 0.0;            // unextended cell width
  double delta = 0.0;        // overlap width
  double overlap_ratio = 0.0;
  int Nc = 1;                // max number of boxes sharing a point
  std::vector<Box> boxes;

  int count() const { return static_cast<int>(boxes.size()); }

  // Indices of all boxes whose closure contains x, ascending.
  // Throws ContractError when x lies outside the domain.
  std::vector<int> owners(const Point& x) const;
};

OverlapPartition build_partition(const Box& domain, int per_axis,
                                 double overlap_ratio);

// Collocation points for the subdomain and coarse problems. Boundary points
// sit exactly on the subdomain boundary: the two endpoints in 1D, uniform
// samples on the four edges in 2D (equal share per edge, remainder to the
// first edges in south/north/west/east order).
struct TrainingSets {
  std::vector<std::vector<Point>> interior;  // per subdomain
  std::vector<std::vector<Point>> boundary;  // per subdomain
  std::vector<Point> coarse_interior;
  std::vector<Point> coarse_boundary;
  std::uint64_t seed = 0;
};

// Coarse counts of zero skip the coarse sets (one-level runs).
TrainingSets sample_training_sets(const OverlapPartition& partition,
                                  const PoissonProblem& problem,
                                  int interior_per_sub, int boundary_per_sub,
                                  int coarse_interior, int coarse_boundary,
                                  std::uint64_t seed);

}  // namespace aspinn
