#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scriptcausal/tensor.hpp"

namespace scriptcausal {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 10.0;  // global norm; <= 0 disables clipping
};

struct AdamState {
  AdamConfig config;
  std::vector<Tensor> m, v;
  std::uint64_t step = 0;

  AdamState() = default;
  AdamState(AdamConfig cfg, std::span<Tensor* const> params);
};

// Clips the gradients to the global norm, then applies one bias-corrected
// Adam step. Throws NumericalError on a non-finite gradient before touching
// any parameter.
void adam_update(AdamState& state, std::span<Tensor* const> params,
                 std::span<Tensor* const> grads);

double global_norm(std::span<Tensor* const> grads);

}  // namespace scriptcausal
