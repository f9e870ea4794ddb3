#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "events.hpp"
#include "layers.hpp"
#include "lif.hpp"
#include "tensor.hpp"

namespace spikekit {

enum class LayerKind : uint8_t { avgpool = 0, conv = 1, dense = 2 };

enum class SpikeMode { hard, smooth };

struct LayerSpec {
  LayerKind kind = LayerKind::avgpool;
  ConvSpec conv;       // valid when kind == conv
  PoolSpec pool;       // valid when kind == avgpool
  int dense_in = 0;    // valid when kind == dense
  int dense_out = 0;
  bool spiking = false;  // LIF state attached (conv and dense layers)
};

/// The fixed architecture: pool(4), conv(2->32,k3,p1,s1)+LIF, pool(2),
/// conv(32->32,k3,p1,s1)+LIF, pool(2), dense(flatten->512)+LIF,
/// dense(512->2)+LIF. Pooling layers carry no neuron state; averaging binary
/// spikes produces the fractional drive for the next convolution.
struct Network {
  std::vector<LayerSpec> layers;
  std::vector<Tensor> weights;  // empty tensor for pooling layers
  std::vector<Tensor> biases;
  LifParams lif;
  std::array<int, 3> input_shape{2, 100, 100};

  size_t parameter_count() const;
  /// Output shape of each layer given the configured input shape.
  std::vector<std::vector<int>> layer_output_shapes() const;
};

/// Builds the standard stack for a [2,H,W] input. Weights are seeded uniform
/// in +-sqrt(1/fan_in); biases start at zero. The dense input size follows
/// from the pooling arithmetic and must come out at 1152 for 100x100 inputs.
Network build_network(const std::array<int, 3>& input_shape, const LifParams& lif,
                      uint64_t seed);

/// Same initialization over a caller-provided stack (small test networks).
Network build_custom_network(const std::array<int, 3>& input_shape,
                             std::vector<LayerSpec> layers, const LifParams& lif,
                             uint64_t seed);

/// Everything BPTT needs from one unrolled pass: per timestep and per layer,
/// the transform input, the updated membrane, and the emitted spikes.
struct ForwardRecord {
  SpikeMode mode = SpikeMode::hard;
  double surrogate_width = 0.5;
  int timesteps = 0;
  // indexed [t][layer]; empty tensors for pooling layers
  std::vector<std::vector<Tensor>> inputs;
  std::vector<std::vector<Tensor>> membranes;
  std::vector<std::vector<Tensor>> spikes;
  Tensor outputs;  // [T, n_classes]
};

ForwardRecord forward(const Network& net, const SpikeTensor& input, SpikeMode mode,
                      double surrogate_width = 0.5);

/// Argmax of the time-averaged output spike rates; ties resolve to class 0.
int classify(const Tensor& outputs);

void save_checkpoint(const Network& net, const std::string& path);
Network load_checkpoint(const std::string& path);

}  // namespace spikekit
