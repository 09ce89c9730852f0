#pragma once

#include <array>

namespace aspinn {

// Coordinates are fixed-size pairs; 1D code ignores the second component.
using Point = std::array<double, 2>;

// Closed axis-aligned box (interval for dim==1).
struct Box {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
  int dim = 1;

  double side(int axis) const { return hi[axis] - lo[axis]; }

  bool contains(const Point& p) const {
    for (int a = 0; a < dim; ++a)
      if (p[a] < lo[a] || p[a] > hi[a]) return false;
    return true;
  }

  bool strictly_inside(const Point& p) const {
    for (int a = 0; a < dim; ++a)
      if (p[a] <= lo[a] || p[a] >= hi[a]) return false;
    return true;
  }

  bool on_boundary(const Point& p) const {
    if (!contains(p)) return false;
    for (int a = 0; a < dim; ++a)
      if (p[a] == lo[a] || p[a] == hi[a]) return true;
    return false;
  }
};

inline Box make_interval(double lo, double hi) {
  return Box{{lo, 0.0}, {hi, 0.0}, 1};
}

inline Box make_rect(double x0, double y0, double x1, double y1) {
  return Box{{x0, y0}, {x1, y1}, 2};
}

}  // namespace aspinn
