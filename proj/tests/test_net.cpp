#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "aspinn/errors.hpp"
#include "aspinn/net.hpp"
#include "aspinn/rng.hpp"
#include "test_util.hpp"

using namespace aspinn;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle for evaluate(): same closed form, written as a separate
// straight line of code (reversed summation order, long double accumulator).
double evaluate_oracle(const MlpNet& net, const Point& x) {
  long double acc = net.b2;
  for (int k = net.hidden_width - 1; k >= 0; --k) {
    long double z = net.b1[static_cast<std::size_t>(k)];
    for (int a = net.input_dim - 1; a >= 0; --a)
      z += static_cast<long double>(net.w1[static_cast<std::size_t>(k) * net.input_dim + a]) * x[a];
    acc += static_cast<long double>(net.w2[static_cast<std::size_t>(k)]) *
           std::sin(static_cast<double>(z));
  }
  return static_cast<double>(acc);
}

// Central-difference Laplacian of evaluate().
double laplacian_fd(const MlpNet& net, const Point& x, double step = 1e-4) {
  double acc = 0.0;
  for (int a = 0; a < net.input_dim; ++a) {
    Point xp = x, xm = x;
    xp[a] += step;
    xm[a] -= step;
    acc += (evaluate(net, xp) - 2.0 * evaluate(net, x) + evaluate(net, xm)) / (step * step);
  }
  return acc;
}

MlpNet random_net(Rng& rng, int dim, int width) {
  MlpNet net = init_net(rng.next_u64(), dim, width);
  // shake the biases too; init leaves them at zero
  for (double& b : net.b1) b = rng.uniform(-1.0, 1.0);
  net.b2 = rng.uniform(-1.0, 1.0);
  return net;
}

CollocationBatch random_batch(Rng& rng, int dim, std::size_t n_interior,
                              std::size_t n_boundary) {
  CollocationBatch batch;
  for (std::size_t i = 0; i < n_interior; ++i) {
    Point x{rng.uniform(-1.0, 1.0), dim == 2 ? rng.uniform(-1.0, 1.0) : 0.0};
    batch.interior.push_back(x);
    batch.interior_rhs.push_back(rng.uniform(-2.0, 2.0));
  }
  for (std::size_t i = 0; i < n_boundary; ++i) {
    Point x{rng.uniform(-1.0, 1.0), dim == 2 ? rng.uniform(-1.0, 1.0) : 0.0};
    batch.boundary.push_back(x);
    batch.boundary_target.push_back(rng.uniform(-2.0, 2.0));
  }
  return batch;
}

}  // namespace

TEST_CASE("init_net is deterministic and counts parameters") {
  const MlpNet a = init_net(1234, 1, 35);
  const MlpNet b = init_net(1234, 1, 35);
  CHECK(a.w1 == b.w1);
  CHECK(a.b1 == b.b1);
  CHECK(a.w2 == b.w2);
  CHECK(a.b2 == b.b2);

  CHECK(a.parameter_count() == 106);
  CHECK(init_net(0, 2, 594).parameter_count() == 2377);
  CHECK(init_net(0, 1, 323).parameter_count() == 970);
  CHECK(init_net(0, 2, 2365).parameter_count() == 9461);

  for (double b1 : a.b1) CHECK(b1 == 0.0);
  CHECK(a.b2 == 0.0);
  for (double w : a.w1) CHECK(std::abs(w) <= 8.0);
  const double lim2 = std::sqrt(6.0 / (35 + 1));
  for (double w : a.w2) CHECK(std::abs(w) <= lim2);
  const MlpNet c = init_net(3, 2, 12);
  for (double w : c.w1) CHECK(std::abs(w) <= 4.0);

  CHECK(init_net(7, 1, 35).w1 != init_net(8, 1, 35).w1);
  CHECK_THROWS_AS(init_net(0, 3, 10), ConfigError);
  CHECK_THROWS_AS(init_net(0, 1, 0), ConfigError);
}

TEST_CASE("evaluate: closed form") {
  MlpNet zero;
  zero.input_dim = 1;
  zero.hidden_width = 2;
  zero.w1 = {0.0, 0.0};
  zero.b1 = {0.0, 0.0};
  zero.w2 = {0.0, 0.0};
  CHECK(evaluate(zero, {0.3, 0.0}) == 0.0);

  MlpNet sine;
  sine.input_dim = 1;
  sine.hidden_width = 1;
  sine.w1 = {1.0};
  sine.b1 = {0.0};
  sine.w2 = {1.0};
  CHECK(evaluate(sine, {kPi / 2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));

  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = trial % 2 + 1;
    MlpNet net = random_net(rng, dim, 1 + trial % 17);
    const Point x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    // error relative to the magnitude of the summation, which bounds the
    // roundoff of any term order
    double scale = std::abs(net.b2);
    for (double w : net.w2) scale += std::abs(w);
    CHECK(std::abs(evaluate(net, x) - evaluate_oracle(net, x)) <= 1e-14 * scale);
  }
}

TEST_CASE("laplacian: closed form vs finite differences") {
  MlpNet zero;
  zero.input_dim = 2;
  zero.hidden_width = 1;
  zero.w1 = {0.0, 0.0};
  zero.b1 = {0.0};
  zero.w2 = {0.0};
  CHECK(laplacian(zero, {0.1, 0.2}) == 0.0);

  // w1 = (1,2), w1 . x = pi/2: lap = -(1+4) * sin(pi/2) = -5
  MlpNet net;
  net.input_dim = 2;
  net.hidden_width = 1;
  net.w1 = {1.0, 2.0};
  net.b1 = {0.0};
  net.w2 = {1.0};
  const Point x{kPi / 2.0 - 2.0, 1.0};
  CHECK(laplacian(net, x) == doctest::Approx(-5.0).epsilon(1e-12));

  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = trial % 2 + 1;
    MlpNet r = random_net(rng, dim, 1 + trial % 11);
    const Point p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    CHECK(test_util::rel_err(laplacian(r, p), laplacian_fd(r, p), 1e-6) <= 1e-5);
  }
}

TEST_CASE("loss: exact solution and duplication invariance") {
  // U(x) = sin(x) solves -u'' = sin(x), so interior residual and boundary
  // mismatch against sin both vanish.
  MlpNet sine;
  sine.input_dim = 1;
  sine.hidden_width = 1;
  sine.w1 = {1.0};
  sine.b1 = {0.0};
  sine.w2 = {1.0};

  CollocationBatch batch;
  for (double x : {0.1, 0.5, 0.9, 1.4}) {
    batch.interior.push_back({x, 0.0});
    batch.interior_rhs.push_back(std::sin(x));
  }
  for (double x : {0.0, 2.0}) {
    batch.boundary.push_back({x, 0.0});
    batch.boundary_target.push_back(std::sin(x));
  }
  const LossGrad lg = loss_and_grad(sine, batch);
  CHECK(lg.loss == doctest::Approx(0.0).epsilon(1e-28));
  for (double g : lg.grad) CHECK(std::abs(g) <= 1e-13);

  Rng rng(21);
  MlpNet net = random_net(rng, 1, 6);
  CollocationBatch b1 = random_batch(rng, 1, 7, 3);
  CollocationBatch b2 = b1;
  b2.interior.insert(b2.interior.end(), b1.interior.begin(), b1.interior.end());
  b2.interior_rhs.insert(b2.interior_rhs.end(), b1.interior_rhs.begin(), b1.interior_rhs.end());
  b2.boundary.insert(b2.boundary.end(), b1.boundary.begin(), b1.boundary.end());
  b2.boundary_target.insert(b2.boundary_target.end(), b1.boundary_target.begin(),
                            b1.boundary_target.end());
  const LossGrad g1 = loss_and_grad(net, b1);
  const LossGrad g2 = loss_and_grad(net, b2);
  CHECK(g1.loss == doctest::Approx(g2.loss).epsilon(1e-14));
  for (std::size_t i = 0; i < g1.grad.size(); ++i)
    CHECK(test_util::rel_err(g1.grad[i], g2.grad[i]) <= 1e-13);
}

TEST_CASE("loss gradient matches finite differences") {
  Rng rng(5150);
  for (int trial = 0; trial < 12; ++trial) {
    const int dim = trial % 2 + 1;
    MlpNet net = random_net(rng, dim, 2 + trial % 5);
    CollocationBatch batch = random_batch(rng, dim, 6, 4);
    if (trial % 3 == 0)
      for (std::size_t i = 0; i < batch.interior.size(); ++i)
        batch.interior_rhs_offset.push_back(rng.uniform(-1.0, 1.0));

    const LossGrad lg = loss_and_grad(net, batch);
    std::vector<double> theta = net.flatten();
    double grad_scale = 1.0;
    for (double g : lg.grad) grad_scale = std::max(grad_scale, std::abs(g));

    const double step = 1e-6;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      MlpNet shifted = net;
      std::vector<double> tp = theta, tm = theta;
      tp[i] += step;
      tm[i] -= step;
      shifted.assign_from_flat(tp);
      const double lp = loss_value(shifted, batch);
      shifted.assign_from_flat(tm);
      const double lm = loss_value(shifted, batch);
      const double fd = (lp - lm) / (2.0 * step);
      CHECK(std::abs(lg.grad[i] - fd) / std::max(grad_scale, 1e-6) <= 1e-5);
    }
  }
}

TEST_CASE("loss is nonnegative; empty lists rejected") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    MlpNet net = random_net(rng, 1, 4);
    CollocationBatch batch = random_batch(rng, 1, 5, 2);
    CHECK(loss_value(net, batch) >= 0.0);
  }

  MlpNet net = init_net(0, 1, 3);
  CollocationBatch no_interior;
  no_interior.boundary.push_back({0.0, 0.0});
  no_interior.boundary_target.push_back(0.0);
  CHECK_THROWS_AS(loss_value(net, no_interior), ContractError);

  CollocationBatch no_boundary;
  no_boundary.interior.push_back({0.0, 0.0});
  no_boundary.interior_rhs.push_back(0.0);
  CHECK_THROWS_AS(loss_value(net, no_boundary), ContractError);
}
