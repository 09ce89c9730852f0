#pragma once

#include <cstdint>
#include <vector>

#include "aspinn/geometry.hpp"

namespace aspinn {

// Single-hidden-layer network with sine activation:
//   U(x) = b2 + sum_k w2[k] * sin(w1[k,:] . x + b1[k])
// One hidden layer keeps the input Laplacian and all parameter derivatives
// in closed form, so the residual gradients below are exact.
struct MlpNet {
  int input_dim = 1;
  int hidden_width = 0;
  std::vector<double> w1;  // hidden_width x input_dim, row-major
  std::vector<double> b1;  // hidden_width
  std::vector<double> w2;  // hidden_width
  double b2 = 0.0;

  int parameter_count() const {
    return hidden_width * input_dim + 2 * hidden_width + 1;
  }

  // Flat parameter order: [w1, b1, w2, b2].
  std::vector<double> flatten() const;
  void assign_from_flat(const std::vector<double>& theta);
};

// Data for one residual-minimization problem. interior_rhs holds f(x) per
// interior point; interior_rhs_offset, when non-empty, is added to f (used by
// the coarse correction problem). boundary_target holds the Dirichlet values.
struct CollocationBatch {
  std::vector<Point> interior;
  std::vector<double> interior_rhs;
  std::vector<double> interior_rhs_offset;  // empty = all zeros
  std::vector<Point> boundary;
  std::vector<double> boundary_target;
};

// Glorot-uniform weights, zero biases; bit-reproducible for a given seed.
MlpNet init_net(std::uint64_t seed, int input_dim, int hidden_width);

double evaluate(const MlpNet& net, const Point& x);

// Closed form: sum_k w2[k] * |w1[k,:]|^2 * (-sin(w1[k,:] . x + b1[k])).
double laplacian(const MlpNet& net, const Point& x);

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // flat layout, parameter_count() entries
};

// Mean-squared interior residual (lap U + f + offset)^2 plus mean-squared
// boundary mismatch (U - target)^2.
double loss_value(const MlpNet& net, const CollocationBatch& batch);
LossGrad loss_and_grad(const MlpNet& net, const CollocationBatch& batch);

}  // namespace aspinn
