#include "scriptcausal/loss.hpp"

#include <algorithm>
#include <cmath>

#include "scriptcausal/errors.hpp"

namespace scriptcausal {

void softmax_inplace(std::span<double> v) {
  if (v.empty()) return;
  const double m = *std::max_element(v.begin(), v.end());
  double z = 0.0;
  for (auto& x : v) {
    x = std::exp(x - m);
    z += x;
  }
  for (auto& x : v) x /= z;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  softmax_inplace(p);
  return p;
}

XentResult softmax_xent(std::span<const double> logits, std::size_t target) {
  if (target >= logits.size()) throw_invalid("softmax_xent: target out of range");
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double x : logits) z += std::exp(x - m);
  XentResult r;
  r.loss = std::log(z) - (logits[target] - m);
  r.grad.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) r.grad[i] = std::exp(logits[i] - m) / z;
  r.grad[target] -= 1.0;
  return r;
}

}  // namespace scriptcausal
