#include "aspinn/adam.hpp"

#include <cmath>

#include "aspinn/errors.hpp"

namespace aspinn {

AdamState make_adam_state(std::size_t n_params, double lr) {
  AdamState st;
  st.m.assign(n_params, 0.0);
  st.v.assign(n_params, 0.0);
  st.lr = lr;
  return st;
}

void adam_step(AdamState& state, std::vector<double>& params,
               const std::vector<double>& grad) {
  const std::size_t n = state.m.size();
  if (params.size() != n || grad.size() != n || state.v.size() != n)
    throw ContractError("adam_step: shape mismatch");

  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

TrainResult train(const MlpNet& net, const CollocationBatch& batch, int epochs,
                  std::uint64_t seed) {
  (void)seed;
  if (epochs < 1) throw ContractError("train: epochs must be >= 1");

  TrainResult out{net, {}};
  out.loss_history.reserve(static_cast<std::size_t>(epochs));
  std::vector<double> theta = out.net.flatten();
  AdamState state = make_adam_state(theta.size());
  for (int e = 0; e < epochs; ++e) {
    LossGrad lg = loss_and_grad(out.net, batch);
    out.loss_history.push_back(lg.loss);
    adam_step(state, theta, lg.grad);
    out.net.assign_from_flat(theta);
  }
  return out;
}

}  // namespace aspinn
