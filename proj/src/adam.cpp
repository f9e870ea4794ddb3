#include "adam.hpp"

#include <cmath>

namespace spikekit {

AdamState make_adam_state(const Network& net) {
  AdamState s;
  for (size_t l = 0; l < net.weights.size(); ++l) {
    s.m.push_back(Tensor::zeros_like(net.weights[l]));
    s.m.push_back(Tensor::zeros_like(net.biases[l]));
    s.v.push_back(Tensor::zeros_like(net.weights[l]));
    s.v.push_back(Tensor::zeros_like(net.biases[l]));
  }
  return s;
}

namespace {

void update_tensor(Tensor& w, const Tensor& g, Tensor& m, Tensor& v, double lr,
                   double w_decay, const AdamConfig& cfg, double bias1, double bias2) {
  for (size_t i = 0; i < w.size(); ++i) {
    const double grad = cfg.decoupled_decay ? g[i] : g[i] + w_decay * w[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad * grad;
    const double m_hat = m[i] / bias1;
    const double v_hat = v[i] / bias2;
    w[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    if (cfg.decoupled_decay) w[i] -= lr * w_decay * w[i];
  }
}

}  // namespace

void adam_step(Network& net, const ParamGrads& grads, AdamState& state, double lr,
               double w_decay, const AdamConfig& cfg) {
  ++state.step;
  const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (size_t l = 0; l < net.weights.size(); ++l) {
    update_tensor(net.weights[l], grads.weights[l], state.m[2 * l], state.v[2 * l], lr,
                  w_decay, cfg, bias1, bias2);
    update_tensor(net.biases[l], grads.biases[l], state.m[2 * l + 1], state.v[2 * l + 1], lr,
                  w_decay, cfg, bias1, bias2);
  }
}

}  // namespace spikekit
