#include "network.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "error.hpp"
#include "rng.hpp"

namespace spikekit {

namespace {

std::vector<int> output_shape_of(const LayerSpec& layer, const std::vector<int>& in) {
  switch (layer.kind) {
    case LayerKind::avgpool:
      return {in[0], pool_out_size(in[1], layer.pool), pool_out_size(in[2], layer.pool)};
    case LayerKind::conv:
      return {layer.conv.out_channels, conv_out_size(in[1], layer.conv),
              conv_out_size(in[2], layer.conv)};
    case LayerKind::dense:
      return {layer.dense_out};
  }
  throw config_error("unknown layer kind");
}

int fan_in_of(const LayerSpec& layer) {
  if (layer.kind == LayerKind::conv)
    return layer.conv.in_channels * layer.conv.kernel_size * layer.conv.kernel_size;
  return layer.dense_in;
}

void init_parameters(Network& net, uint64_t seed) {
  Rng rng(mix_seed(seed, 0x1417));
  net.weights.resize(net.layers.size());
  net.biases.resize(net.layers.size());
  for (size_t i = 0; i < net.layers.size(); ++i) {
    const LayerSpec& layer = net.layers[i];
    if (layer.kind == LayerKind::avgpool) continue;
    if (layer.kind == LayerKind::conv) {
      net.weights[i] = Tensor({layer.conv.out_channels, layer.conv.in_channels,
                               layer.conv.kernel_size, layer.conv.kernel_size});
      net.biases[i] = Tensor({layer.conv.out_channels});
    } else {
      net.weights[i] = Tensor({layer.dense_out, layer.dense_in});
      net.biases[i] = Tensor({layer.dense_out});
    }
    const double bound = std::sqrt(1.0 / fan_in_of(layer));
    for (double& w : net.weights[i].data) w = rng.uniform(-bound, bound);
  }
}

}  // namespace

size_t Network::parameter_count() const {
  size_t n = 0;
  for (size_t i = 0; i < layers.size(); ++i) n += weights[i].size() + biases[i].size();
  return n;
}

std::vector<std::vector<int>> Network::layer_output_shapes() const {
  std::vector<std::vector<int>> shapes;
  std::vector<int> cur = {input_shape[0], input_shape[1], input_shape[2]};
  for (const LayerSpec& layer : layers) {
    cur = output_shape_of(layer, cur);
    shapes.push_back(cur);
  }
  return shapes;
}

Network build_custom_network(const std::array<int, 3>& input_shape,
                             std::vector<LayerSpec> layers, const LifParams& lif,
                             uint64_t seed) {
  validate(lif);
  Network net;
  net.layers = std::move(layers);
  net.lif = lif;
  net.input_shape = input_shape;

  // dense_in fields left at 0 are filled from the shape arithmetic
  std::vector<int> cur = {input_shape[0], input_shape[1], input_shape[2]};
  for (LayerSpec& layer : net.layers) {
    if (layer.kind == LayerKind::dense && layer.dense_in == 0) {
      int flat = 1;
      for (int d : cur) flat *= d;
      layer.dense_in = flat;
    }
    if (layer.kind == LayerKind::dense) {
      int flat = 1;
      for (int d : cur) flat *= d;
      if (flat != layer.dense_in)
        throw config_error("dense layer expects " + std::to_string(layer.dense_in) +
                           " inputs but receives " + std::to_string(flat));
    }
    cur = output_shape_of(layer, cur);
  }
  init_parameters(net, seed);
  return net;
}

Network build_network(const std::array<int, 3>& input_shape, const LifParams& lif,
                      uint64_t seed) {
  if (input_shape[0] != 2)
    throw config_error("network input must have 2 polarity channels, got " +
                       std::to_string(input_shape[0]));

  std::vector<LayerSpec> layers(7);
  layers[0] = {.kind = LayerKind::avgpool, .pool = {4}};
  layers[1] = {.kind = LayerKind::conv,
               .conv = {.in_channels = 2, .out_channels = 32, .kernel_size = 3, .padding = 1, .stride = 1},
               .spiking = true};
  layers[2] = {.kind = LayerKind::avgpool, .pool = {2}};
  layers[3] = {.kind = LayerKind::conv,
               .conv = {.in_channels = 32, .out_channels = 32, .kernel_size = 3, .padding = 1, .stride = 1},
               .spiking = true};
  layers[4] = {.kind = LayerKind::avgpool, .pool = {2}};
  layers[5] = {.kind = LayerKind::dense, .dense_out = 512, .spiking = true};
  layers[6] = {.kind = LayerKind::dense, .dense_in = 512, .dense_out = 2, .spiking = true};

  Network net = build_custom_network(input_shape, std::move(layers), lif, seed);

  if (input_shape[1] == 100 && input_shape[2] == 100 && net.layers[5].dense_in != 1152)
    throw std::logic_error("architecture bug: flatten size " +
                           std::to_string(net.layers[5].dense_in) + " != 1152 on 100x100 input");
  return net;
}

ForwardRecord forward(const Network& net, const SpikeTensor& input, SpikeMode mode,
                      double surrogate_width) {
  const Tensor& frames = input.data;
  if (frames.shape.size() != 4)
    throw config_error("forward: input must be [T,2,H,W], got " + shape_str(frames.shape));
  const int timesteps = frames.dim(0);
  if (timesteps < 1) throw config_error("forward: need at least one timestep");
  if (frames.dim(1) != net.input_shape[0] || frames.dim(2) != net.input_shape[1] ||
      frames.dim(3) != net.input_shape[2])
    throw config_error("forward: input frame shape " + shape_str(frames.shape) +
                       " does not match network input " +
                       shape_str({net.input_shape[0], net.input_shape[1], net.input_shape[2]}));

  const size_t n_layers = net.layers.size();
  const auto out_shapes = net.layer_output_shapes();
  const int n_classes = out_shapes.back()[0];

  ForwardRecord rec;
  rec.mode = mode;
  rec.surrogate_width = surrogate_width;
  rec.timesteps = timesteps;
  rec.inputs.assign(timesteps, std::vector<Tensor>(n_layers));
  rec.membranes.assign(timesteps, std::vector<Tensor>(n_layers));
  rec.spikes.assign(timesteps, std::vector<Tensor>(n_layers));
  rec.outputs = Tensor({timesteps, n_classes});

  std::vector<LifState> states(n_layers);
  for (size_t l = 0; l < n_layers; ++l)
    if (net.layers[l].spiking) states[l] = LifState(out_shapes[l]);

  const size_t frame_len = Tensor::numel({frames.dim(1), frames.dim(2), frames.dim(3)});
  for (int t = 0; t < timesteps; ++t) {
    Tensor cur({frames.dim(1), frames.dim(2), frames.dim(3)});
    std::memcpy(cur.data.data(), frames.data.data() + static_cast<size_t>(t) * frame_len,
                frame_len * sizeof(double));

    for (size_t l = 0; l < n_layers; ++l) {
      const LayerSpec& layer = net.layers[l];
      Tensor x;
      switch (layer.kind) {
        case LayerKind::avgpool:
          x = avgpool_forward(cur, layer.pool);
          break;
        case LayerKind::conv:
          rec.inputs[t][l] = cur;
          x = conv2d_forward(cur, net.weights[l], net.biases[l], layer.conv);
          break;
        case LayerKind::dense: {
          rec.inputs[t][l] = cur;
          x = dense_forward(cur, net.weights[l], net.biases[l]);
          break;
        }
      }
      if (layer.spiking) {
        states[l] = mode == SpikeMode::hard
                        ? lif_step(states[l], x, net.lif)
                        : lif_step_smooth(states[l], x, net.lif, surrogate_width);
        rec.membranes[t][l] = states[l].v_m;
        rec.spikes[t][l] = states[l].o_prev;
        cur = states[l].o_prev;
      } else {
        cur = std::move(x);
      }
    }
    for (int c = 0; c < n_classes; ++c)
      rec.outputs[static_cast<size_t>(t) * n_classes + c] = cur[static_cast<size_t>(c)];
  }
  return rec;
}

int classify(const Tensor& outputs) {
  if (outputs.shape.size() != 2 || outputs.dim(0) < 1)
    throw data_error("classify: outputs must be [T, classes]");
  const int timesteps = outputs.dim(0), n_classes = outputs.dim(1);
  int best = 0;
  double best_rate = -1.0;
  for (int c = 0; c < n_classes; ++c) {
    double sum = 0.0;
    for (int t = 0; t < timesteps; ++t) sum += outputs[static_cast<size_t>(t) * n_classes + c];
    const double rate = sum / timesteps;
    if (rate > best_rate) {  // strict: ties keep the lower class index
      best_rate = rate;
      best = c;
    }
  }
  return best;
}

namespace {

constexpr char kMagic[8] = {'S', 'P', 'K', 'N', 'E', 'T', '0', '1'};

void put_u32(std::ofstream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::ifstream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw parse_error(path + ": truncated checkpoint");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void put_f64(std::ofstream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::ifstream& in, const std::string& path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw parse_error(path + ": truncated checkpoint");
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void put_tensor(std::ofstream& out, const Tensor& t) {
  put_u32(out, static_cast<uint32_t>(t.shape.size()));
  for (int d : t.shape) put_u32(out, static_cast<uint32_t>(d));
  for (double v : t.data) put_f64(out, v);
}

Tensor get_tensor(std::ifstream& in, const std::string& path) {
  const uint32_t rank = get_u32(in, path);
  std::vector<int> shape(rank);
  for (uint32_t i = 0; i < rank; ++i) shape[i] = static_cast<int>(get_u32(in, path));
  Tensor t(shape);
  for (double& v : t.data) v = get_f64(in, path);
  return t;
}

}  // namespace

void save_checkpoint(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write checkpoint " + path);
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, 1);  // version
  for (int d : net.input_shape) put_u32(out, static_cast<uint32_t>(d));
  put_f64(out, net.lif.v_th);
  put_f64(out, net.lif.tau);
  put_f64(out, net.lif.v_r);
  put_f64(out, net.lif.r_in);
  put_u32(out, static_cast<uint32_t>(net.layers.size()));
  for (size_t i = 0; i < net.layers.size(); ++i) {
    const LayerSpec& layer = net.layers[i];
    put_u32(out, static_cast<uint32_t>(layer.kind));
    put_u32(out, layer.spiking ? 1 : 0);
    put_u32(out, static_cast<uint32_t>(layer.conv.in_channels));
    put_u32(out, static_cast<uint32_t>(layer.conv.out_channels));
    put_u32(out, static_cast<uint32_t>(layer.conv.kernel_size));
    put_u32(out, static_cast<uint32_t>(layer.conv.padding));
    put_u32(out, static_cast<uint32_t>(layer.conv.stride));
    put_u32(out, static_cast<uint32_t>(layer.pool.window));
    put_u32(out, static_cast<uint32_t>(layer.dense_in));
    put_u32(out, static_cast<uint32_t>(layer.dense_out));
    put_tensor(out, net.weights[i]);
    put_tensor(out, net.biases[i]);
  }
  if (!out) throw io_error("write failed for checkpoint " + path);
}

Network load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open checkpoint " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw parse_error(path + ": not a network checkpoint (bad magic)");
  const uint32_t version = get_u32(in, path);
  if (version != 1)
    throw parse_error(path + ": unsupported checkpoint version " + std::to_string(version));

  Network net;
  for (int& d : net.input_shape) d = static_cast<int>(get_u32(in, path));
  net.lif.v_th = get_f64(in, path);
  net.lif.tau = get_f64(in, path);
  net.lif.v_r = get_f64(in, path);
  net.lif.r_in = get_f64(in, path);
  const uint32_t n_layers = get_u32(in, path);
  net.layers.resize(n_layers);
  net.weights.resize(n_layers);
  net.biases.resize(n_layers);
  for (uint32_t i = 0; i < n_layers; ++i) {
    LayerSpec& layer = net.layers[i];
    layer.kind = static_cast<LayerKind>(get_u32(in, path));
    layer.spiking = get_u32(in, path) != 0;
    layer.conv.in_channels = static_cast<int>(get_u32(in, path));
    layer.conv.out_channels = static_cast<int>(get_u32(in, path));
    layer.conv.kernel_size = static_cast<int>(get_u32(in, path));
    layer.conv.padding = static_cast<int>(get_u32(in, path));
    layer.conv.stride = static_cast<int>(get_u32(in, path));
    layer.pool.window = static_cast<int>(get_u32(in, path));
    layer.dense_in = static_cast<int>(get_u32(in, path));
    layer.dense_out = static_cast<int>(get_u32(in, path));
    net.weights[i] = get_tensor(in, path);
    net.biases[i] = get_tensor(in, path);
  }
  return net;
}

}  // namespace spikekit
