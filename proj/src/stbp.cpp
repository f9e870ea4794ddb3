#include "stbp.hpp"

#include <cmath>

#include "error.hpp"

namespace spikekit {

ParamGrads zero_grads_like(const Network& net) {
  ParamGrads g;
  g.weights.reserve(net.weights.size());
  g.biases.reserve(net.biases.size());
  for (size_t i = 0; i < net.weights.size(); ++i) {
    g.weights.push_back(Tensor::zeros_like(net.weights[i]));
    g.biases.push_back(Tensor::zeros_like(net.biases[i]));
  }
  return g;
}

void accumulate(ParamGrads& dst, const ParamGrads& src) {
  for (size_t l = 0; l < dst.weights.size(); ++l) {
    for (size_t i = 0; i < dst.weights[l].size(); ++i) dst.weights[l][i] += src.weights[l][i];
    for (size_t i = 0; i < dst.biases[l].size(); ++i) dst.biases[l][i] += src.biases[l][i];
  }
}

double stbp_loss(const Tensor& outputs_batch, const Tensor& labels_onehot) {
  if (outputs_batch.shape.size() != 3)
    throw data_error("stbp_loss: outputs must be [S,T,C], got " + shape_str(outputs_batch.shape));
  const int s_n = outputs_batch.dim(0), t_n = outputs_batch.dim(1), c_n = outputs_batch.dim(2);
  if (labels_onehot.shape != std::vector<int>{s_n, c_n})
    throw data_error("stbp_loss: labels must be " + shape_str({s_n, c_n}) + ", got " +
                     shape_str(labels_onehot.shape));
  for (int s = 0; s < s_n; ++s) {
    int ones = 0;
    for (int c = 0; c < c_n; ++c) {
      const double y = labels_onehot[static_cast<size_t>(s) * c_n + c];
      if (y == 1.0)
        ++ones;
      else if (y != 0.0)
        throw data_error("stbp_loss: label row " + std::to_string(s) + " is not one-hot");
    }
    if (ones != 1) throw data_error("stbp_loss: label row " + std::to_string(s) + " is not one-hot");
  }

  double total = 0.0;
  for (int s = 0; s < s_n; ++s) {
    for (int c = 0; c < c_n; ++c) {
      double rate = 0.0;
      for (int t = 0; t < t_n; ++t)
        rate += outputs_batch[(static_cast<size_t>(s) * t_n + t) * c_n + c];
      rate /= t_n;
      const double diff = labels_onehot[static_cast<size_t>(s) * c_n + c] - rate;
      total += diff * diff;
    }
  }
  return total / (2.0 * s_n);
}

Tensor surrogate_grad(const Tensor& v_m, const LifParams& p, double a) {
  if (!(a > 0.0)) throw config_error("surrogate half-width must be positive");
  Tensor g = Tensor::zeros_like(v_m);
  const double inv_2a = 1.0 / (2.0 * a);
  for (size_t i = 0; i < v_m.size(); ++i)
    if (std::abs(v_m[i] - p.v_th) < a) g[i] = inv_2a;
  return g;
}

ParamGrads stbp_backward(const Network& net, const ForwardRecord& record,
                         const Tensor& label_onehot, int batch_size) {
  const size_t n_layers = net.layers.size();
  const int t_n = record.timesteps;
  const auto out_shapes = net.layer_output_shapes();
  const int c_n = out_shapes.back()[0];
  if (label_onehot.size() != static_cast<size_t>(c_n))
    throw data_error("stbp_backward: label length " + std::to_string(label_onehot.size()) +
                     " does not match " + std::to_string(c_n) + " output classes");
  if (record.outputs.shape != std::vector<int>{t_n, c_n})
    throw data_error("stbp_backward: record outputs shape mismatch");

  // input shape of every layer, for the pooling adjoint
  std::vector<std::vector<int>> in_shapes(n_layers);
  {
    std::vector<int> cur = {net.input_shape[0], net.input_shape[1], net.input_shape[2]};
    for (size_t l = 0; l < n_layers; ++l) {
      in_shapes[l] = cur;
      cur = out_shapes[l];
    }
  }

  // d(loss)/d(output spike at any timestep) = (rate - y) / (S*T)
  std::vector<double> out_delta(c_n);
  for (int c = 0; c < c_n; ++c) {
    double rate = 0.0;
    for (int t = 0; t < t_n; ++t) rate += record.outputs[static_cast<size_t>(t) * c_n + c];
    rate /= t_n;
    out_delta[c] = (rate - label_onehot[static_cast<size_t>(c)]) /
                   (static_cast<double>(batch_size) * t_n);
  }

  const bool smooth = record.mode == SpikeMode::smooth;
  const double tau = net.lif.tau;
  ParamGrads grads = zero_grads_like(net);
  std::vector<Tensor> dv_next(n_layers);  // d(loss)/dV at t+1; empty until first use

  const double inv_2a = 1.0 / (2.0 * record.surrogate_width);

  for (int t = t_n - 1; t >= 0; --t) {
    Tensor delta({c_n});
    for (int c = 0; c < c_n; ++c) delta[static_cast<size_t>(c)] = out_delta[c];

    for (size_t li = n_layers; li-- > 0;) {
      const LayerSpec& layer = net.layers[li];

      // chain through the neuron: delta is d/d(o^t), dx becomes d/d(x^t)
      Tensor dx;
      if (layer.spiking) {
        const Tensor& v_m = record.membranes[t][li];
        const Tensor& o_t = record.spikes[t][li];
        const bool has_future = !dv_next[li].shape.empty();
        Tensor dv = Tensor::zeros_like(v_m);
        for (size_t i = 0; i < dv.size(); ++i) {
          double delta_o = delta[i];
          if (smooth && has_future) delta_o += dv_next[li][i] * (-tau * v_m[i]);
          const double sg = std::abs(v_m[i] - net.lif.v_th) < record.surrogate_width ? inv_2a : 0.0;
          double v = delta_o * sg;
          if (has_future) v += dv_next[li][i] * tau * (1.0 - o_t[i]);
          dv[i] = v;
        }
        dx = dv;
        dv_next[li] = std::move(dv);
      } else {
        dx = std::move(delta);
      }
      dx.shape = out_shapes[li];  // undo the flatten if a dense layer sat above

      switch (layer.kind) {
        case LayerKind::avgpool:
          delta = avgpool_backward(dx, layer.pool, in_shapes[li]);
          break;
        case LayerKind::conv: {
          ConvGrads cg = conv2d_backward(dx, record.inputs[t][li], net.weights[li], layer.conv);
          for (size_t i = 0; i < cg.weights.size(); ++i) grads.weights[li][i] += cg.weights[i];
          for (size_t i = 0; i < cg.bias.size(); ++i) grads.biases[li][i] += cg.bias[i];
          delta = std::move(cg.input);
          break;
        }
        case LayerKind::dense: {
          DenseGrads dg = dense_backward(dx, record.inputs[t][li], net.weights[li]);
          for (size_t i = 0; i < dg.weights.size(); ++i) grads.weights[li][i] += dg.weights[i];
          for (size_t i = 0; i < dg.bias.size(); ++i) grads.biases[li][i] += dg.bias[i];
          delta = std::move(dg.input);
          break;
        }
      }
    }
  }
  return grads;
}

}  // namespace spikekit
