#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hdsf/param.hpp"

namespace hdsf {

struct GradCheckReport {
  double max_rel_error = 0.0;
  // Worst relative error per parameter group, in registry order.
  std::vector<std::pair<std::string, double>> per_param;
};

// Compares reverse-mode gradients against central finite differences.
//
// loss_fn(true) must run a full forward/backward pass and accumulate
// gradients into the given parameters; loss_fn(false) is forward-only.
// Both must be deterministic. When max_coords_per_param > 0, at most that
// many coordinates are probed per parameter (seeded sampling); 0 probes all.
GradCheckReport finite_difference_check(
    const std::function<double(bool compute_grad)>& loss_fn,
    const std::vector<Parameter*>& params, double epsilon,
    std::size_t max_coords_per_param = 0, std::uint64_t seed = 0);

}  // namespace hdsf
