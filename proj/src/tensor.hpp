#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace spikekit {

/// Dense row-major N-d array of doubles. All layer arithmetic runs at 64-bit
/// precision; gradient checks depend on it.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s);

  static size_t numel(const std::vector<int>& shape);
  static Tensor zeros_like(const Tensor& other);

  size_t size() const { return data.size(); }
  int dim(size_t i) const { return shape[i]; }

  double& operator[](size_t i) { return data[i]; }
  double operator[](size_t i) const { return data[i]; }

  void fill(double v);
  bool all_finite() const;
};

bool same_shape(const Tensor& a, const Tensor& b);
std::string shape_str(const std::vector<int>& shape);

}  // namespace spikekit
