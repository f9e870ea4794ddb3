#include "tensor.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace spikekit {

size_t Tensor::numel(const std::vector<int>& shape) {
  size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw config_error("tensor dimension must be non-negative, got " + std::to_string(d));
    n *= static_cast<size_t>(d);
  }
  return n;
}

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)), data(numel(shape), 0.0) {}

Tensor Tensor::zeros_like(const Tensor& other) {
  Tensor t;
  t.shape = other.shape;
  t.data.assign(other.data.size(), 0.0);
  return t;
}

void Tensor::fill(double v) { std::fill(data.begin(), data.end(), v); }

bool Tensor::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

bool same_shape(const Tensor& a, const Tensor& b) { return a.shape == b.shape; }

std::string shape_str(const std::vector<int>& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace spikekit
