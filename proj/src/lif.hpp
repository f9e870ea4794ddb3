#pragma once

#include "tensor.hpp"

namespace spikekit {

/// Neuron constants. The reset potential is fixed at 0 and the input
/// resistance at 1 (absorbed into the synaptic weights), so a spike wipes the
/// membrane and the next step integrates the fresh drive alone.
struct LifParams {
  double v_th = 0.4;  // threshold potential, > 0
  double tau = 0.25;  // leak multiplier per timestep when no spike, in (0,1)
  double v_r = 0.0;
  double r_in = 1.0;
};

void validate(const LifParams& p);

/// Per-layer membrane state. v_m and o_prev always share the layer's output
/// shape; both start at zero for every new sample.
struct LifState {
  Tensor v_m;
  Tensor o_prev;

  LifState() = default;
  explicit LifState(const std::vector<int>& shape) : v_m(shape), o_prev(shape) {}
};

/// One discrete membrane update:
///   v' = v * leak(o_prev) + x,    leak(o) = tau if o == 0 else 0
///   o  = 1 if v' >= v_th else 0   (threshold is inclusive)
/// x must already include the layer bias. The emitted spikes are the
/// o_prev of the returned state.
LifState lif_step(const LifState& state, const Tensor& x, const LifParams& p);

/// Differentiable relaxation used for gradient verification:
///   o    = clamp((v' - v_th) / (2a) + 0.5, 0, 1)
///   leak = tau * (1 - o_prev)
/// Agrees with lif_step whenever |v' - v_th| >= a and o_prev is binary.
LifState lif_step_smooth(const LifState& state, const Tensor& x,
                         const LifParams& p, double a);

}  // namespace spikekit
