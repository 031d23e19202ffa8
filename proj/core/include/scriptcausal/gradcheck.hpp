#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "scriptcausal/tensor.hpp"

namespace scriptcausal {

class Rng;

struct ParamSlot {
  std::string name;
  Tensor* value = nullptr;
  const Tensor* grad = nullptr;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
};

// Central-difference check of analytic gradients. Up to per_tensor entries of
// each tensor are probed (all of them when the tensor is smaller), chosen
// with rng. Relative error uses max(|analytic|, |numeric|, 1e-8) as the
// denominator. loss must be a pure function of the parameter values.
GradCheckResult finite_diff_check(const std::function<double()>& loss,
                                  std::span<const ParamSlot> params, double eps,
                                  std::size_t per_tensor, Rng& rng);

}  // namespace scriptcausal
