#include "hdsf/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hdsf {

namespace {
std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}
}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_product(shape_) != data_.size()) {
    throw ContractViolation("tensor data length does not match shape");
  }
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  std::size_t n = shape_product(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::vec(std::vector<double> values) {
  std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

Tensor Tensor::uniform(std::vector<std::size_t> shape, double range,
                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-range, range);
  Tensor t = zeros(std::move(shape));
  for (double& v : t.data()) v = dist(rng);
  return t;
}

std::size_t Tensor::rows() const {
  if (shape_.size() != 2) throw ContractViolation("rows() on non-matrix");
  return shape_[0];
}

std::size_t Tensor::cols() const {
  if (shape_.size() != 2) throw ContractViolation("cols() on non-matrix");
  return shape_[1];
}

double& Tensor::at(std::size_t r, std::size_t c) {
  return data_[r * cols() + c];
}

double Tensor::at(std::size_t r, std::size_t c) const {
  return data_[r * cols() + c];
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void Tensor::require_finite(const char* where) const {
  if (!all_finite()) {
    throw NumericError(std::string("non-finite value in ") + where);
  }
}

Tensor leaky_relu(const Tensor& x, double slope) {
  if (!(slope > 0.0 && slope < 1.0)) {
    throw ContractViolation("leaky_relu slope must be in (0,1)");
  }
  x.require_finite("leaky_relu input");
  Tensor out = x;
  for (double& v : out.data()) v = std::max(v, slope * v);
  return out;
}

Tensor softmax_stable(const Tensor& x) {
  if (x.size() == 0) throw ContractViolation("softmax of empty vector");
  x.require_finite("softmax input");
  const auto& d = x.data();
  double mx = *std::max_element(d.begin(), d.end());
  Tensor out = x;
  double sum = 0.0;
  for (double& v : out.data()) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : out.data()) v /= sum;
  return out;
}

}  // namespace hdsf
