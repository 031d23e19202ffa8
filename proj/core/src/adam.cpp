#include "scriptcausal/adam.hpp"

#include <cmath>

#include "scriptcausal/errors.hpp"

namespace scriptcausal {

AdamState::AdamState(AdamConfig cfg, std::span<Tensor* const> params) : config(cfg) {
  for (const Tensor* p : params) {
    m.emplace_back(p->shape);
    v.emplace_back(p->shape);
  }
}

double global_norm(std::span<Tensor* const> grads) {
  double s = 0.0;
  for (const Tensor* g : grads)
    for (double x : g->values) s += x * x;
  return std::sqrt(s);
}

void adam_update(AdamState& st, std::span<Tensor* const> params,
                 std::span<Tensor* const> grads) {
  if (params.size() != grads.size() || params.size() != st.m.size())
    throw_invalid("adam_update: parameter count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i]->shape != grads[i]->shape || params[i]->shape != st.m[i].shape)
      throw_invalid("adam_update: shape mismatch");

  const double norm = global_norm(grads);
  if (!std::isfinite(norm)) throw_numerical("non-finite gradient");
  const auto& c = st.config;
  const double scale = (c.clip_norm > 0 && norm > c.clip_norm) ? c.clip_norm / norm : 1.0;

  ++st.step;
  const double t = static_cast<double>(st.step);
  const double corr1 = 1.0 - std::pow(c.beta1, t);
  const double corr2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i]->values;
    const auto& g = grads[i]->values;
    auto& m = st.m[i].values;
    auto& v = st.v[i].values;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double gj = g[j] * scale;
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * gj;
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * gj * gj;
      p[j] -= c.lr * (m[j] / corr1) / (std::sqrt(v[j] / corr2) + c.epsilon);
    }
  }
}

}  // namespace scriptcausal
