#pragma once

#include <cstdint>

#include "stbp.hpp"

namespace spikekit {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Default couples the L2 penalty into the gradient before the moment
  // updates; the decoupled variant subtracts lr*w_decay*w separately.
  bool decoupled_decay = false;
};

struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  int64_t step = 0;
};

AdamState make_adam_state(const Network& net);

/// One Adam update over every parameter tensor of the network:
///   g' = g + w_decay * w
///   m  = b1*m + (1-b1)*g';  v = b2*v + (1-b2)*g'^2
///   w -= lr * mhat / (sqrt(vhat) + eps)
void adam_step(Network& net, const ParamGrads& grads, AdamState& state, double lr,
               double w_decay, const AdamConfig& cfg = {});

}  // namespace spikekit
