#include "hdsf/param.hpp"

#include <cmath>

namespace hdsf {

void adam_step(Parameter& p, double lr, const AdamConfig& cfg) {
  p.grad.require_finite("adam_step gradient");
  p.step_count += 1;
  double t = static_cast<double>(p.step_count);
  double bc1 = 1.0 - std::pow(cfg.beta1, t);
  double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < p.value.size(); ++i) {
    double g = p.grad[i];
    p.m[i] = cfg.beta1 * p.m[i] + (1.0 - cfg.beta1) * g;
    p.v[i] = cfg.beta2 * p.v[i] + (1.0 - cfg.beta2) * g * g;
    double m_hat = p.m[i] / bc1;
    double v_hat = p.v[i] / bc2;
    p.value[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
  p.value.require_finite("adam_step result");
}

}  // namespace hdsf
