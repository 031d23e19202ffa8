#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scriptcausal {

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);
void softmax_inplace(std::span<double> values);

struct XentResult {
  double loss = 0.0;
  std::vector<double> grad;  // softmax(logits) - onehot(target)
};

// Throws InvalidArgument when target is out of range.
XentResult softmax_xent(std::span<const double> logits, std::size_t target);

}  // namespace scriptcausal
