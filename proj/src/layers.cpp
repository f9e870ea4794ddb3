#include "layers.hpp"

#include <string>

#include "error.hpp"

namespace spikekit {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw config_error(msg);
}

}  // namespace

int conv_out_size(int in, const ConvSpec& spec) {
  return (in + 2 * spec.padding - spec.kernel_size) / spec.stride + 1;
}

int pool_out_size(int in, const PoolSpec& spec) { return in / spec.window; }

Tensor conv2d_forward(const Tensor& input, const Tensor& weights,
                      const Tensor& bias, const ConvSpec& spec) {
  require(spec.stride >= 1, "conv: stride must be >= 1, got " + std::to_string(spec.stride));
  require(spec.kernel_size >= 1, "conv: kernel_size must be >= 1, got " + std::to_string(spec.kernel_size));
  require(spec.padding >= 0, "conv: padding must be >= 0, got " + std::to_string(spec.padding));
  require(input.shape.size() == 3, "conv: input must be rank 3, got shape " + shape_str(input.shape));
  require(input.dim(0) == spec.in_channels,
          "conv: input has " + std::to_string(input.dim(0)) + " channels, spec expects " +
              std::to_string(spec.in_channels));
  const std::vector<int> wshape = {spec.out_channels, spec.in_channels,
                                   spec.kernel_size, spec.kernel_size};
  require(weights.shape == wshape,
          "conv: weight shape " + shape_str(weights.shape) + " does not match spec " + shape_str(wshape));
  require(bias.shape == std::vector<int>{spec.out_channels},
          "conv: bias shape " + shape_str(bias.shape) + " does not match out_channels " +
              std::to_string(spec.out_channels));

  const int ci_n = spec.in_channels, co_n = spec.out_channels;
  const int h = input.dim(1), w = input.dim(2);
  const int k = spec.kernel_size, pad = spec.padding, stride = spec.stride;
  const int oh_n = conv_out_size(h, spec), ow_n = conv_out_size(w, spec);
  require(oh_n >= 1 && ow_n >= 1,
          "conv: kernel " + std::to_string(k) + " does not fit input " + shape_str(input.shape) +
              " with padding " + std::to_string(pad));

  Tensor out({co_n, oh_n, ow_n});
  const double* in = input.data.data();
  const double* wt = weights.data.data();
  double* o = out.data.data();

  for (int co = 0; co < co_n; ++co) {
    const double b = bias[static_cast<size_t>(co)];
    for (int oh = 0; oh < oh_n; ++oh) {
      for (int ow = 0; ow < ow_n; ++ow) {
        double acc = b;
        for (int ci = 0; ci < ci_n; ++ci) {
          const double* in_c = in + static_cast<size_t>(ci) * h * w;
          const double* wt_c = wt + ((static_cast<size_t>(co) * ci_n + ci) * k) * k;
          for (int kh = 0; kh < k; ++kh) {
            const int ih = oh * stride - pad + kh;
            if (ih < 0 || ih >= h) continue;
            const double* in_row = in_c + static_cast<size_t>(ih) * w;
            const double* wt_row = wt_c + static_cast<size_t>(kh) * k;
            for (int kw = 0; kw < k; ++kw) {
              const int iw = ow * stride - pad + kw;
              if (iw < 0 || iw >= w) continue;
              acc += wt_row[kw] * in_row[iw];
            }
          }
        }
        o[(static_cast<size_t>(co) * oh_n + oh) * ow_n + ow] = acc;
      }
    }
  }
  return out;
}

ConvGrads conv2d_backward(const Tensor& grad_out, const Tensor& saved_input,
                          const Tensor& weights, const ConvSpec& spec) {
  const int h = saved_input.dim(1), w = saved_input.dim(2);
  const int oh_n = conv_out_size(h, spec), ow_n = conv_out_size(w, spec);
  require(grad_out.shape == std::vector<int>{spec.out_channels, oh_n, ow_n},
          "conv backward: grad_out shape " + shape_str(grad_out.shape) +
              " does not match forward output " + shape_str({spec.out_channels, oh_n, ow_n}));

  const int ci_n = spec.in_channels, co_n = spec.out_channels;
  const int k = spec.kernel_size, pad = spec.padding, stride = spec.stride;

  ConvGrads g;
  g.input = Tensor(saved_input.shape);
  g.weights = Tensor(weights.shape);
  g.bias = Tensor({co_n});

  const double* go = grad_out.data.data();
  const double* in = saved_input.data.data();
  const double* wt = weights.data.data();
  double* gi = g.input.data.data();
  double* gw = g.weights.data.data();

  for (int co = 0; co < co_n; ++co) {
    double gb = 0.0;
    for (int oh = 0; oh < oh_n; ++oh) {
      for (int ow = 0; ow < ow_n; ++ow) {
        const double gov = go[(static_cast<size_t>(co) * oh_n + oh) * ow_n + ow];
        gb += gov;
        if (gov == 0.0) continue;
        for (int ci = 0; ci < ci_n; ++ci) {
          const size_t in_base = static_cast<size_t>(ci) * h * w;
          const size_t wt_base = ((static_cast<size_t>(co) * ci_n + ci) * k) * k;
          for (int kh = 0; kh < k; ++kh) {
            const int ih = oh * stride - pad + kh;
            if (ih < 0 || ih >= h) continue;
            for (int kw = 0; kw < k; ++kw) {
              const int iw = ow * stride - pad + kw;
              if (iw < 0 || iw >= w) continue;
              const size_t ii = in_base + static_cast<size_t>(ih) * w + iw;
              const size_t wi = wt_base + static_cast<size_t>(kh) * k + kw;
              gw[wi] += gov * in[ii];
              gi[ii] += gov * wt[wi];
            }
          }
        }
      }
    }
    g.bias[static_cast<size_t>(co)] = gb;
  }
  return g;
}

Tensor avgpool_forward(const Tensor& input, const PoolSpec& spec) {
  require(spec.window >= 1, "pool: window must be >= 1, got " + std::to_string(spec.window));
  require(input.shape.size() == 3, "pool: input must be rank 3, got shape " + shape_str(input.shape));
  const int c_n = input.dim(0), h = input.dim(1), w = input.dim(2);
  const int win = spec.window;
  require(h >= win && w >= win,
          "pool: window " + std::to_string(win) + " larger than input " + shape_str(input.shape));
  const int oh_n = h / win, ow_n = w / win;
  const double inv = 1.0 / (static_cast<double>(win) * win);

  Tensor out({c_n, oh_n, ow_n});
  const double* in = input.data.data();
  double* o = out.data.data();
  for (int c = 0; c < c_n; ++c) {
    const double* in_c = in + static_cast<size_t>(c) * h * w;
    for (int oh = 0; oh < oh_n; ++oh) {
      for (int ow = 0; ow < ow_n; ++ow) {
        double acc = 0.0;
        for (int dy = 0; dy < win; ++dy) {
          const double* row = in_c + static_cast<size_t>(oh * win + dy) * w + ow * win;
          for (int dx = 0; dx < win; ++dx) acc += row[dx];
        }
        o[(static_cast<size_t>(c) * oh_n + oh) * ow_n + ow] = acc * inv;
      }
    }
  }
  return out;
}

Tensor avgpool_backward(const Tensor& grad_out, const PoolSpec& spec,
                        const std::vector<int>& input_shape) {
  require(input_shape.size() == 3, "pool backward: input shape must be rank 3");
  const int c_n = input_shape[0], h = input_shape[1], w = input_shape[2];
  const int win = spec.window;
  const int oh_n = h / win, ow_n = w / win;
  require(grad_out.shape == std::vector<int>{c_n, oh_n, ow_n},
          "pool backward: grad_out shape " + shape_str(grad_out.shape) +
              " does not match pooled shape " + shape_str({c_n, oh_n, ow_n}));
  const double inv = 1.0 / (static_cast<double>(win) * win);

  Tensor gi(input_shape);  // remainder cells stay zero
  const double* go = grad_out.data.data();
  double* g = gi.data.data();
  for (int c = 0; c < c_n; ++c) {
    double* g_c = g + static_cast<size_t>(c) * h * w;
    for (int oh = 0; oh < oh_n; ++oh) {
      for (int ow = 0; ow < ow_n; ++ow) {
        const double v = go[(static_cast<size_t>(c) * oh_n + oh) * ow_n + ow] * inv;
        for (int dy = 0; dy < win; ++dy) {
          double* row = g_c + static_cast<size_t>(oh * win + dy) * w + ow * win;
          for (int dx = 0; dx < win; ++dx) row[dx] = v;
        }
      }
    }
  }
  return gi;
}

Tensor dense_forward(const Tensor& input, const Tensor& weights,
                     const Tensor& bias) {
  require(weights.shape.size() == 2, "dense: weights must be rank 2, got " + shape_str(weights.shape));
  const int m = weights.dim(0), n = weights.dim(1);
  require(static_cast<int>(input.size()) == n,
          "dense: input length " + std::to_string(input.size()) + " does not match weight columns " +
              std::to_string(n));
  require(bias.shape == std::vector<int>{m},
          "dense: bias shape " + shape_str(bias.shape) + " does not match rows " + std::to_string(m));

  Tensor out({m});
  const double* in = input.data.data();
  const double* wt = weights.data.data();
  for (int i = 0; i < m; ++i) {
    const double* row = wt + static_cast<size_t>(i) * n;
    double acc = bias[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) acc += row[j] * in[j];
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

DenseGrads dense_backward(const Tensor& grad_out, const Tensor& saved_input,
                          const Tensor& weights) {
  const int m = weights.dim(0), n = weights.dim(1);
  require(static_cast<int>(grad_out.size()) == m,
          "dense backward: grad_out length " + std::to_string(grad_out.size()) +
              " does not match rows " + std::to_string(m));
  require(static_cast<int>(saved_input.size()) == n,
          "dense backward: saved input length " + std::to_string(saved_input.size()) +
              " does not match columns " + std::to_string(n));

  DenseGrads g;
  g.input = Tensor({n});
  g.weights = Tensor(weights.shape);
  g.bias = grad_out;
  g.bias.shape = {m};

  const double* go = grad_out.data.data();
  const double* in = saved_input.data.data();
  const double* wt = weights.data.data();
  double* gi = g.input.data.data();
  double* gw = g.weights.data.data();
  for (int i = 0; i < m; ++i) {
    const double gov = go[i];
    const double* wrow = wt + static_cast<size_t>(i) * n;
    double* grow = gw + static_cast<size_t>(i) * n;
    if (gov != 0.0) {
      for (int j = 0; j < n; ++j) {
        grow[j] = gov * in[j];
        gi[j] += gov * wrow[j];
      }
    }
  }
  return g;
}

}  // namespace spikekit
