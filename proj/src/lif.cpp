#include "lif.hpp"

#include <string>

#include "error.hpp"

namespace spikekit {

void validate(const LifParams& p) {
  if (!(p.v_th > 0.0)) throw config_error("v_th must be positive, got " + std::to_string(p.v_th));
  if (!(p.tau > 0.0 && p.tau < 1.0)) throw config_error("tau must be in (0,1), got " + std::to_string(p.tau));
}

namespace {

void check_shapes(const LifState& state, const Tensor& x) {
  if (!same_shape(state.v_m, x) || !same_shape(state.o_prev, x))
    throw config_error("lif_step: state shape " + shape_str(state.v_m.shape) +
                       " does not match input shape " + shape_str(x.shape));
}

}  // namespace

LifState lif_step(const LifState& state, const Tensor& x, const LifParams& p) {
  check_shapes(state, x);
  LifState next;
  next.v_m = Tensor::zeros_like(x);
  next.o_prev = Tensor::zeros_like(x);
  const size_t n = x.size();
  for (size_t i = 0; i < n; ++i) {
    const double leak = state.o_prev[i] == 0.0 ? p.tau : 0.0;
    const double v = state.v_m[i] * leak + x[i];
    next.v_m[i] = v;
    next.o_prev[i] = v >= p.v_th ? 1.0 : 0.0;
  }
  return next;
}

LifState lif_step_smooth(const LifState& state, const Tensor& x,
                         const LifParams& p, double a) {
  check_shapes(state, x);
  if (!(a > 0.0)) throw config_error("surrogate half-width must be positive, got " + std::to_string(a));
  LifState next;
  next.v_m = Tensor::zeros_like(x);
  next.o_prev = Tensor::zeros_like(x);
  const double inv_2a = 1.0 / (2.0 * a);
  const size_t n = x.size();
  for (size_t i = 0; i < n; ++i) {
    const double leak = p.tau * (1.0 - state.o_prev[i]);
    const double v = state.v_m[i] * leak + x[i];
    double o = (v - p.v_th) * inv_2a + 0.5;
    if (o < 0.0) o = 0.0;
    if (o > 1.0) o = 1.0;
    next.v_m[i] = v;
    next.o_prev[i] = o;
  }
  return next;
}

}  // namespace spikekit
