#pragma once

#include <functional>
#include <string>

#include "aspinn/geometry.hpp"

namespace aspinn {

// Manufactured Poisson problem -lap u = f on a box with Dirichlet data g.
// `exact` is the manufactured solution; every catalog problem carries one.
struct PoissonProblem {
  std::string id;
  int dim = 1;
  Box domain;
  std::function<double(const Point&)> f;
  std::function<double(const Point&)> g;
  std::function<double(const Point&)> exact;  // may be empty
};

// u*(x) = sin(2 pi x) on (-1, 1), zero boundary values.
PoissonProblem smooth_1d();

// u*(x) = 5 sin(pi x) + sin(8 pi x) + sin(16 pi x)/2 + sin(32 pi x)/4
//         + sin(64 pi x)/8 on (-1, 1).
PoissonProblem multiscale_1d();

// u*(x,y) = sin(pi x) sin(pi y) on (0,1)^2.
PoissonProblem smooth_2d();

// u*(x,y) = A x(1-x) y(1-y) sin((x-1/2)(y-1/2)/eps) on (0,1)^2.
PoissonProblem high_contrast_2d(double A, double eps);

// Lookup by CLI id: smooth1d, multiscale1d, smooth2d, highcontrast2d.
// highcontrast2d uses the supplied (A, eps).
PoissonProblem problem_by_id(const std::string& id, double A = 100.0,
                             double eps = 0.05);

}  // namespace aspinn
