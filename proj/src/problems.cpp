#include "aspinn/problems.hpp"

#include <cmath>
#include <numbers>

#include "aspinn/errors.hpp"

namespace aspinn {

namespace {
constexpr double kPi = std::numbers::pi;
}

PoissonProblem smooth_1d() {
  PoissonProblem p;
  p.id = "smooth1d";
  p.dim = 1;
  p.domain = make_interval(-1.0, 1.0);
  p.exact = [](const Point& x) { return std::sin(2.0 * kPi * x[0]); };
  // -u'' with u = sin(2 pi x)
  p.f = [](const Point& x) {
    return 4.0 * kPi * kPi * std::sin(2.0 * kPi * x[0]);
  };
  p.g = [](const Point&) { return 0.0; };
  return p;
}

PoissonProblem multiscale_1d() {
  // amplitude / frequency pairs of the five sine modes
  static constexpr double amp[5] = {5.0, 1.0, 0.5, 0.25, 0.125};
  static constexpr double freq[5] = {1.0, 8.0, 16.0, 32.0, 64.0};

  PoissonProblem p;
  p.id = "multiscale1d";
  p.dim = 1;
  p.domain = make_interval(-1.0, 1.0);
  p.exact = [](const Point& x) {
    double u = 0.0;
    for (int i = 0; i < 5; ++i) u += amp[i] * std::sin(freq[i] * kPi * x[0]);
    return u;
  };
  // termwise -u'': each mode picks up (k pi)^2
  p.f = [](const Point& x) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double k = freq[i] * kPi;
      s += amp[i] * k * k * std::sin(k * x[0]);
    }
    return s;
  };
  p.g = [](const Point&) { return 0.0; };
  return p;
}

PoissonProblem smooth_2d() {
  PoissonProblem p;
  p.id = "smooth2d";
  p.dim = 2;
  p.domain = make_rect(0.0, 0.0, 1.0, 1.0);
  p.exact = [](const Point& x) {
    return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
  };
  p.f = [](const Point& x) {
    return 2.0 * kPi * kPi * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
  };
  p.g = [](const Point&) { return 0.0; };
  return p;
}

PoissonProblem high_contrast_2d(double A, double eps) {
  if (!(eps > 0.0)) throw ConfigError("high_contrast_2d: eps must be > 0");

  PoissonProblem p;
  p.id = "highcontrast2d";
  p.dim = 2;
  p.domain = make_rect(0.0, 0.0, 1.0, 1.0);
  p.exact = [A, eps](const Point& pt) {
    const double x = pt[0], y = pt[1];
    return A * x * (1.0 - x) * y * (1.0 - y) *
           std::sin((x - 0.5) * (y - 0.5) / eps);
  };
  // With u = A p sin(phi), p = x(1-x)y(1-y), phi = (x-1/2)(y-1/2)/eps:
  //   u_xx = A [p_xx sin + 2 p_x phi_x cos - p phi_x^2 sin]   (phi_xx = 0)
  // and symmetrically in y, giving
  //   f = -lap u
  //     = A [(2y(1-y) + 2x(1-x) + p (phi_x^2 + phi_y^2)) sin
  //          - 2 (p_x phi_x + p_y phi_y) cos].
  p.f = [A, eps](const Point& pt) {
    const double x = pt[0], y = pt[1];
    const double px = (1.0 - 2.0 * x) * y * (1.0 - y);
    const double py = x * (1.0 - x) * (1.0 - 2.0 * y);
    const double pv = x * (1.0 - x) * y * (1.0 - y);
    const double phix = (y - 0.5) / eps;
    const double phiy = (x - 0.5) / eps;
    const double phi = (x - 0.5) * (y - 0.5) / eps;
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    return A * ((2.0 * y * (1.0 - y) + 2.0 * x * (1.0 - x) +
                 pv * (phix * phix + phiy * phiy)) *
                    s -
                2.0 * (px * phix + py * phiy) * c);
  };
  p.g = [](const Point&) { return 0.0; };
  return p;
}

PoissonProblem problem_by_id(const std::string& id, double A, double eps) {
  if (id == "smooth1d") return smooth_1d();
  if (id == "multiscale1d") return multiscale_1d();
  if (id == "smooth2d") return smooth_2d();
  if (id == "highcontrast2d") return high_contrast_2d(A, eps);
  throw ConfigError("unknown problem id: " + id);
}

}  // namespace aspinn
