#pragma once

#include <algorithm>
#include <cmath>

namespace test_util {

// |a-b| relative to the larger magnitude, with an absolute floor for
// near-zero comparisons.
inline double rel_err(double a, double b, double floor = 1e-12) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

}  // namespace test_util
