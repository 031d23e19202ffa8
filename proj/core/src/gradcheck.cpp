#include "scriptcausal/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/rng.hpp"

namespace scriptcausal {

GradCheckResult finite_diff_check(const std::function<double()>& loss,
                                  std::span<const ParamSlot> params, double eps,
                                  std::size_t per_tensor, Rng& rng) {
  if (!(eps > 0)) throw_invalid("finite_diff_check: eps must be positive");
  GradCheckResult res;
  for (const auto& slot : params) {
    if (slot.value->shape != slot.grad->shape)
      throw_invalid("finite_diff_check: gradient shape mismatch for " + slot.name);
    const std::size_t n = slot.value->size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (n > per_tensor) {
      rng.shuffle(idx);
      idx.resize(per_tensor);
      std::sort(idx.begin(), idx.end());
    }
    for (std::size_t i : idx) {
      double& x = slot.value->values[i];
      const double saved = x;
      x = saved + eps;
      const double up = loss();
      x = saved - eps;
      const double down = loss();
      x = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double analytic = slot.grad->values[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      const double rel = std::abs(analytic - numeric) / denom;
      ++res.checked;
      if (rel > res.max_rel_error || res.checked == 1) {
        res.max_rel_error = rel;
        res.worst_param = slot.name;
        res.worst_index = i;
        res.worst_analytic = analytic;
        res.worst_numeric = numeric;
      }
    }
  }
  return res;
}

}  // namespace scriptcausal
