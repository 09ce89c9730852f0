#include "aspinn/partition.hpp"

#include <algorithm>
#include <cmath>

#include "aspinn/errors.hpp"
#include "aspinn/rng.hpp"

namespace aspinn {

namespace {

// seed stream tags
constexpr std::uint64_t kInteriorStream = 1;
constexpr std::uint64_t kBoundaryStream = 2;
constexpr std::uint64_t kCoarseInteriorStream = 3;
constexpr std::uint64_t kCoarseBoundaryStream = 4;

struct Interval {
  double lo, hi;
};

std::vector<Interval> axis_intervals(double lo, double hi, int n, double ratio) {
  const double h = (hi - lo) / n;
  const double half_delta = 0.5 * ratio * h;
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double a = lo + i * h - (i > 0 ? half_delta : 0.0);
    double b = lo + (i + 1) * h + (i + 1 < n ? half_delta : 0.0);
    a = std::max(a, lo);
    b = std::min(b, hi);
    out.push_back({a, b});
  }
  // endpoints pinned exactly to the domain
  out.front().lo = lo;
  out.back().hi = hi;
  return out;
}

}  // namespace

std::vector<int> OverlapPartition::owners(const Point& x) const {
  if (!domain.contains(x))
    throw ContractError("owners: point lies outside the domain");
  std::vector<int> out;
  for (int k = 0; k < count(); ++k)
    if (boxes[static_cast<std::size_t>(k)].contains(x)) out.push_back(k);
  return out;
}

OverlapPartition build_partition(const Box& domain, int per_axis,
                                 double overlap_ratio) {
  if (per_axis < 1) throw ConfigError("build_partition: per_axis must be >= 1");
  if (!(overlap_ratio > 0.0 && overlap_ratio < 1.0))
    throw ConfigError("build_partition: overlap_ratio must lie in (0, 1)");

  OverlapPartition p;
  p.domain = domain;
  p.dim = domain.dim;
  p.per_axis = per_axis;
  p.H = domain.side(0) / per_axis;
  p.overlap_ratio = overlap_ratio;
  p.delta = overlap_ratio * p.H;
  const int per_axis_colors = per_axis == 1 ? 1 : 2;
  p.Nc = p.dim == 1 ? per_axis_colors : per_axis_colors * per_axis_colors;

  const auto xs = axis_intervals(domain.lo[0], domain.hi[0], per_axis, overlap_ratio);
  if (p.dim == 1) {
    for (const Interval& iv : xs)
      p.boxes.push_back(make_interval(iv.lo, iv.hi));
  } else {
    const auto ys = axis_intervals(domain.lo[1], domain.hi[1], per_axis, overlap_ratio);
    for (int iy = 0; iy < per_axis; ++iy)
      for (int ix = 0; ix < per_axis; ++ix) {
        const Interval& a = xs[static_cast<std::size_t>(ix)];
        const Interval& b = ys[static_cast<std::size_t>(iy)];
        p.boxes.push_back(make_rect(a.lo, b.lo, a.hi, b.hi));
      }
  }
  return p;
}

namespace {

Point sample_inside(Rng& rng, const Box& box) {
  Point x{0.0, 0.0};
  for (int a = 0; a < box.dim; ++a) x[a] = rng.uniform_open(box.lo[a], box.hi[a]);
  return x;
}

// count points on the closed edges of a 2D box, equal share per edge with the
// remainder going to the earlier edges (south, north, west, east)
std::vector<Point> sample_box_edges(Rng& rng, const Box& box, int count) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const int base = count / 4;
  const int rem = count % 4;
  const int per_edge[4] = {base + (rem > 0), base + (rem > 1), base + (rem > 2), base};
  for (int e = 0; e < 4; ++e) {
    for (int i = 0; i < per_edge[e]; ++i) {
      Point x{0.0, 0.0};
      switch (e) {
        case 0: x = {rng.uniform(box.lo[0], box.hi[0]), box.lo[1]}; break;
        case 1: x = {rng.uniform(box.lo[0], box.hi[0]), box.hi[1]}; break;
        case 2: x = {box.lo[0], rng.uniform(box.lo[1], box.hi[1])}; break;
        default: x = {box.hi[0], rng.uniform(box.lo[1], box.hi[1])}; break;
      }
      pts.push_back(x);
    }
  }
  return pts;
}

}  // namespace

TrainingSets sample_training_sets(const OverlapPartition& partition,
                                  const PoissonProblem& problem,
                                  int interior_per_sub, int boundary_per_sub,
                                  int coarse_interior, int coarse_boundary,
                                  std::uint64_t seed) {
  if (partition.dim != problem.dim)
    throw ContractError("sample_training_sets: partition/problem dimension mismatch");
  if (interior_per_sub < 1)
    throw ConfigError("sample_training_sets: interior_per_sub must be >= 1");
  if (partition.dim == 1 && boundary_per_sub != 2)
    throw ConfigError("sample_training_sets: 1D subdomain boundaries have exactly two points");
  if (partition.dim == 2 && boundary_per_sub < 1)
    throw ConfigError("sample_training_sets: boundary_per_sub must be >= 1");
  if (coarse_interior < 0 || coarse_boundary < 0)
    throw ConfigError("sample_training_sets: coarse counts must be >= 0");
  if (partition.dim == 1 && coarse_boundary != 0 && coarse_boundary != 2)
    throw ConfigError("sample_training_sets: 1D coarse boundary is the two domain endpoints");

  TrainingSets sets;
  sets.seed = seed;
  const int n = partition.count();
  sets.interior.resize(static_cast<std::size_t>(n));
  sets.boundary.resize(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    const Box& box = partition.boxes[static_cast<std::size_t>(i)];
    Rng rin(derive_seed(seed, {kInteriorStream, static_cast<std::uint64_t>(i)}));
    auto& interior = sets.interior[static_cast<std::size_t>(i)];
    interior.reserve(static_cast<std::size_t>(interior_per_sub));
    for (int k = 0; k < interior_per_sub; ++k) interior.push_back(sample_inside(rin, box));

    auto& boundary = sets.boundary[static_cast<std::size_t>(i)];
    if (partition.dim == 1) {
      boundary = {Point{box.lo[0], 0.0}, Point{box.hi[0], 0.0}};
    } else {
      Rng rbd(derive_seed(seed, {kBoundaryStream, static_cast<std::uint64_t>(i)}));
      boundary = sample_box_edges(rbd, box, boundary_per_sub);
    }
  }

  if (coarse_interior > 0) {
    Rng rci(derive_seed(seed, {kCoarseInteriorStream}));
    sets.coarse_interior.reserve(static_cast<std::size_t>(coarse_interior));
    for (int k = 0; k < coarse_interior; ++k)
      sets.coarse_interior.push_back(sample_inside(rci, partition.domain));
  }
  if (coarse_boundary > 0) {
    if (partition.dim == 1) {
      sets.coarse_boundary = {Point{partition.domain.lo[0], 0.0},
                              Point{partition.domain.hi[0], 0.0}};
    } else {
      Rng rcb(derive_seed(seed, {kCoarseBoundaryStream}));
      sets.coarse_boundary = sample_box_edges(rcb, partition.domain, coarse_boundary);
    }
  }
  return sets;
}

}  // namespace aspinn
