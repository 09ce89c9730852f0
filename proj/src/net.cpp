#include "aspinn/net.hpp"

#include <cmath>
#include <cstring>

#include "aspinn/errors.hpp"
#include "aspinn/rng.hpp"

namespace aspinn {

std::vector<double> MlpNet::flatten() const {
  std::vector<double> theta;
  theta.reserve(static_cast<std::size_t>(parameter_count()));
  theta.insert(theta.end(), w1.begin(), w1.end());
  theta.insert(theta.end(), b1.begin(), b1.end());
  theta.insert(theta.end(), w2.begin(), w2.end());
  theta.push_back(b2);
  return theta;
}

void MlpNet::assign_from_flat(const std::vector<double>& theta) {
  const std::size_t hd = w1.size();
  const std::size_t h = b1.size();
  if (theta.size() != hd + 2 * h + 1)
    throw ContractError("assign_from_flat: parameter vector length mismatch");
  std::memcpy(w1.data(), theta.data(), hd * sizeof(double));
  std::memcpy(b1.data(), theta.data() + hd, h * sizeof(double));
  std::memcpy(w2.data(), theta.data() + hd + h, h * sizeof(double));
  b2 = theta[hd + 2 * h];
}

MlpNet init_net(std::uint64_t seed, int input_dim, int hidden_width) {
  if (input_dim != 1 && input_dim != 2)
    throw ConfigError("init_net: input_dim must be 1 or 2");
  if (hidden_width < 1)
    throw ConfigError("init_net: hidden_width must be >= 1");

  MlpNet net;
  net.input_dim = input_dim;
  net.hidden_width = hidden_width;
  net.w1.resize(static_cast<std::size_t>(hidden_width) * input_dim);
  net.b1.assign(static_cast<std::size_t>(hidden_width), 0.0);
  net.w2.resize(static_cast<std::size_t>(hidden_width));
  net.b2 = 0.0;

  Rng rng(seed);
  // The first layer fixes the representable frequency band; sine units with
  // near-zero weights sit in their linear regime and train very slowly, so
  // the band is opened up front. The output layer stays at the usual
  // fan-based scale.
  const double lim1 = input_dim == 1 ? 8.0 : 4.0;
  for (double& w : net.w1) w = rng.uniform(-lim1, lim1);
  const double lim2 = std::sqrt(6.0 / (hidden_width + 1));
  for (double& w : net.w2) w = rng.uniform(-lim2, lim2);
  return net;
}

double evaluate(const MlpNet& net, const Point& x) {
  const int d = net.input_dim;
  const int h = net.hidden_width;
  double acc = net.b2;
  for (int k = 0; k < h; ++k) {
    double z = net.b1[static_cast<std::size_t>(k)];
    for (int a = 0; a < d; ++a) z += net.w1[static_cast<std::size_t>(k) * d + a] * x[a];
    acc += net.w2[static_cast<std::size_t>(k)] * std::sin(z);
  }
  return acc;
}

double laplacian(const MlpNet& net, const Point& x) {
  const int d = net.input_dim;
  const int h = net.hidden_width;
  double acc = 0.0;
  for (int k = 0; k < h; ++k) {
    double z = net.b1[static_cast<std::size_t>(k)];
    double n2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double w = net.w1[static_cast<std::size_t>(k) * d + a];
      z += w * x[a];
      n2 += w * w;
    }
    acc -= net.w2[static_cast<std::size_t>(k)] * n2 * std::sin(z);
  }
  return acc;
}

namespace {

void check_batch(const CollocationBatch& batch) {
  if (batch.interior.empty())
    throw ContractError("collocation batch: interior point list is empty");
  if (batch.boundary.empty())
    throw ContractError("collocation batch: boundary point list is empty");
  if (batch.interior_rhs.size() != batch.interior.size())
    throw ContractError("collocation batch: interior rhs size mismatch");
  if (!batch.interior_rhs_offset.empty() &&
      batch.interior_rhs_offset.size() != batch.interior.size())
    throw ContractError("collocation batch: rhs offset size mismatch");
  if (batch.boundary_target.size() != batch.boundary.size())
    throw ContractError("collocation batch: boundary target size mismatch");
}

// Shared loss kernel; accumulates the gradient when grad != nullptr.
double loss_impl(const MlpNet& net, const CollocationBatch& batch,
                 std::vector<double>* grad) {
  check_batch(batch);
  const int d = net.input_dim;
  const int h = net.hidden_width;
  const std::size_t hu = static_cast<std::size_t>(h);

  double* gw1 = nullptr;
  double* gb1 = nullptr;
  double* gw2 = nullptr;
  double* gb2 = nullptr;
  if (grad) {
    grad->assign(static_cast<std::size_t>(net.parameter_count()), 0.0);
    gw1 = grad->data();
    gb1 = gw1 + hu * d;
    gw2 = gb1 + hu;
    gb2 = gw2 + hu;
  }

  std::vector<double> n2(hu);
  for (int k = 0; k < h; ++k) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const double w = net.w1[static_cast<std::size_t>(k) * d + a];
      s += w * w;
    }
    n2[static_cast<std::size_t>(k)] = s;
  }

  std::vector<double> sinz(hu), cosz(hu);
  double loss = 0.0;

  const double wi = 1.0 / static_cast<double>(batch.interior.size());
  const bool has_offset = !batch.interior_rhs_offset.empty();
  for (std::size_t p = 0; p < batch.interior.size(); ++p) {
    const Point& x = batch.interior[p];
    double r = batch.interior_rhs[p] + (has_offset ? batch.interior_rhs_offset[p] : 0.0);
    for (int k = 0; k < h; ++k) {
      double z = net.b1[static_cast<std::size_t>(k)];
      for (int a = 0; a < d; ++a) z += net.w1[static_cast<std::size_t>(k) * d + a] * x[a];
      const double s = std::sin(z);
      const double c = std::cos(z);
      sinz[static_cast<std::size_t>(k)] = s;
      cosz[static_cast<std::size_t>(k)] = c;
      r -= net.w2[static_cast<std::size_t>(k)] * n2[static_cast<std::size_t>(k)] * s;
    }
    loss += wi * r * r;
    if (grad) {
      const double coef = 2.0 * wi * r;
      for (int k = 0; k < h; ++k) {
        const std::size_t ku = static_cast<std::size_t>(k);
        gw2[ku] -= coef * n2[ku] * sinz[ku];
        const double t = coef * net.w2[ku];
        gb1[ku] -= t * n2[ku] * cosz[ku];
        for (int a = 0; a < d; ++a) {
          const double w = net.w1[ku * d + a];
          gw1[ku * d + a] -= t * (2.0 * w * sinz[ku] + n2[ku] * cosz[ku] * x[a]);
        }
      }
    }
  }

  const double wb = 1.0 / static_cast<double>(batch.boundary.size());
  for (std::size_t p = 0; p < batch.boundary.size(); ++p) {
    const Point& x = batch.boundary[p];
    double m = net.b2 - batch.boundary_target[p];
    for (int k = 0; k < h; ++k) {
      double z = net.b1[static_cast<std::size_t>(k)];
      for (int a = 0; a < d; ++a) z += net.w1[static_cast<std::size_t>(k) * d + a] * x[a];
      const double s = std::sin(z);
      sinz[static_cast<std::size_t>(k)] = s;
      cosz[static_cast<std::size_t>(k)] = std::cos(z);
      m += net.w2[static_cast<std::size_t>(k)] * s;
    }
    loss += wb * m * m;
    if (grad) {
      const double coef = 2.0 * wb * m;
      *gb2 += coef;
      for (int k = 0; k < h; ++k) {
        const std::size_t ku = static_cast<std::size_t>(k);
        gw2[ku] += coef * sinz[ku];
        const double t = coef * net.w2[ku] * cosz[ku];
        gb1[ku] += t;
        for (int a = 0; a < d; ++a) gw1[ku * d + a] += t * x[a];
      }
    }
  }

  return loss;
}

}  // namespace

double loss_value(const MlpNet& net, const CollocationBatch& batch) {
  return loss_impl(net, batch, nullptr);
}

LossGrad loss_and_grad(const MlpNet& net, const CollocationBatch& batch) {
  LossGrad out;
  out.loss = loss_impl(net, batch, &out.grad);
  return out;
}

}  // namespace aspinn
