#pragma once

#include <cstdint>
#include <vector>

#include "aspinn/net.hpp"

namespace aspinn {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

AdamState make_adam_state(std::size_t n_params, double lr = 1e-3);

// One bias-corrected Adam update in place.
void adam_step(AdamState& state, std::vector<double>& params,
               const std::vector<double>& grad);

struct TrainResult {
  MlpNet net;
  std::vector<double> loss_history;  // loss at the start of each epoch
};

// Full-batch Adam on a fixed collocation batch. There is no sampling inside
// the loop, so the result depends only on (net, batch, epochs); `seed` is
// part of the signature but unused.
TrainResult train(const MlpNet& net, const CollocationBatch& batch, int epochs,
                  std::uint64_t seed);

}  // namespace aspinn
