#pragma once

#include "tensor.hpp"

namespace spikekit {

struct ConvSpec {
  int in_channels = 0;
  int out_channels = 0;
  int kernel_size = 1;
  int padding = 0;
  int stride = 1;
};

// Non-overlapping average pooling; stride equals the window. Trailing rows
// and columns that do not fill a full window are dropped (floor semantics).
struct PoolSpec {
  int window = 1;
};

int conv_out_size(int in, const ConvSpec& spec);
int pool_out_size(int in, const PoolSpec& spec);

/// Cross-correlation with zero padding. input [C_in,H,W], weights
/// [C_out,C_in,k,k], bias [C_out] -> [C_out,H',W'].
Tensor conv2d_forward(const Tensor& input, const Tensor& weights,
                      const Tensor& bias, const ConvSpec& spec);

struct ConvGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};

ConvGrads conv2d_backward(const Tensor& grad_out, const Tensor& saved_input,
                          const Tensor& weights, const ConvSpec& spec);

Tensor avgpool_forward(const Tensor& input, const PoolSpec& spec);

/// Adjoint of avgpool_forward. Needs the pre-pooling spatial size back so the
/// dropped remainder cells can be restored as zeros.
Tensor avgpool_backward(const Tensor& grad_out, const PoolSpec& spec,
                        const std::vector<int>& input_shape);

/// out = W * input + bias. input is read as a flat vector of length n.
Tensor dense_forward(const Tensor& input, const Tensor& weights,
                     const Tensor& bias);

struct DenseGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};

DenseGrads dense_backward(const Tensor& grad_out, const Tensor& saved_input,
                          const Tensor& weights);

}  // namespace spikekit
