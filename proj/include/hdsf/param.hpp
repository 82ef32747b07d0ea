#pragma once

#include <string>

#include "hdsf/tensor.hpp"

namespace hdsf {

// One trainable tensor with its accumulated gradient and ADAM moments.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor m;
  Tensor v;
  long step_count = 0;

  Parameter() = default;
  Parameter(std::string name_, Tensor init)
      : name(std::move(name_)),
        value(std::move(init)),
        grad(Tensor::zeros(value.shape())),
        m(Tensor::zeros(value.shape())),
        v(Tensor::zeros(value.shape())) {}

  void zero_grad() {
    for (double& g : grad.data()) g = 0.0;
  }
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected ADAM update from the accumulated gradient. The gradient
// itself is left untouched; the caller zeroes it between steps.
void adam_step(Parameter& p, double lr, const AdamConfig& cfg = {});

}  // namespace hdsf
