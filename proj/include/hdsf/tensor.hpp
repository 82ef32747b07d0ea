#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "hdsf/errors.hpp"

namespace hdsf {

// Dense row-major tensor of doubles. Rank 1 and 2 are all the model needs.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor vec(std::vector<double> values);
  static Tensor scalar(double v);
  // Uniform in [-range, range], deterministic under the caller's generator.
  static Tensor uniform(std::vector<std::size_t> shape, double range,
                        std::mt19937_64& rng);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::size_t rows() const;
  std::size_t cols() const;

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(std::size_t r, std::size_t c);
  double at(std::size_t r, std::size_t c) const;

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
  bool all_finite() const;
  void require_finite(const char* where) const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Elementwise max(x, slope*x). Rejects non-finite input.
Tensor leaky_relu(const Tensor& x, double slope);

// Max-shifted softmax over a rank-1 tensor. Empty input is a contract violation.
Tensor softmax_stable(const Tensor& x);

}  // namespace hdsf
