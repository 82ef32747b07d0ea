#include "hdsf/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hdsf {

GradCheckReport finite_difference_check(
    const std::function<double(bool)>& loss_fn,
    const std::vector<Parameter*>& params, double epsilon,
    std::size_t max_coords_per_param, std::uint64_t seed) {
  for (Parameter* p : params) p->zero_grad();
  loss_fn(true);

  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  std::mt19937_64 rng(seed);
  GradCheckReport report;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    std::vector<std::size_t> coords(p.value.size());
    std::iota(coords.begin(), coords.end(), 0);
    if (max_coords_per_param > 0 && coords.size() > max_coords_per_param) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(max_coords_per_param);
    }
    double worst = 0.0;
    for (std::size_t c : coords) {
      double orig = p.value[c];
      p.value[c] = orig + epsilon;
      double lp = loss_fn(false);
      p.value[c] = orig - epsilon;
      double lm = loss_fn(false);
      p.value[c] = orig;
      double numeric = (lp - lm) / (2.0 * epsilon);
      double rel = std::abs(analytic[pi][c] - numeric) /
                   std::max(1e-8, std::abs(numeric));
      worst = std::max(worst, rel);
    }
    report.per_param.emplace_back(p.name, worst);
    report.max_rel_error = std::max(report.max_rel_error, worst);
  }
  return report;
}

}  // namespace hdsf
