#pragma once

#include "network.hpp"
#include "tensor.hpp"

namespace spikekit {

/// Gradient buffers aligned with Network::weights / Network::biases
/// (empty tensors for pooling layers).
struct ParamGrads {
  std::vector<Tensor> weights;
  std::vector<Tensor> biases;
};

ParamGrads zero_grads_like(const Network& net);
void accumulate(ParamGrads& dst, const ParamGrads& src);

/// Mean-squared distance between each label and the time-averaged output:
///   L = 1/(2S) * sum_s || y_s - 1/T * sum_t o_s^t ||^2
/// outputs_batch is [S,T,C]; labels is one-hot [S,C].
double stbp_loss(const Tensor& outputs_batch, const Tensor& labels_onehot);

/// Rectangular surrogate for the spike threshold: 1/(2a) where
/// |v - v_th| < a, else 0. This is the a.e. derivative of the smooth
/// firing ramp, so smooth-mode gradients are finite-difference checkable.
Tensor surrogate_grad(const Tensor& v_m, const LifParams& p, double a);

/// Reverse sweep over timesteps and layers for one sample. batch_size is the
/// S in the loss normalization; summing the returned grads over a batch gives
/// the batch-loss gradient.
///
/// The temporal path carries d/dV^{t+1} * leak(o^t) back one step. In hard
/// mode the leak gate is detached (the binary reset has no usable
/// derivative); in smooth mode the pass is the exact adjoint of the relaxed
/// forward, including the gate's own dependence on o^t.
ParamGrads stbp_backward(const Network& net, const ForwardRecord& record,
                         const Tensor& label_onehot, int batch_size);

}  // namespace spikekit
