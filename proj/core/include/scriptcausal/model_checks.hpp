#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scriptcausal/conditional_model.hpp"
#include "scriptcausal/gradcheck.hpp"
#include "scriptcausal/text_encoder.hpp"

namespace scriptcausal {

class Rng;

// Small random models checked against finite differences on a random batch.
// Parameters are drawn uniformly in +-param_scale: at a fresh initialization
// the reset-gate gradients are around 1e-7 relative to the loss, below what
// central differences at eps 1e-5 resolve in double precision.
struct GradCheckSetup {
  std::size_t vocab = 9;
  std::size_t tokens = 7;
  std::size_t dim = 8;
  std::size_t hidden = 5;
  std::size_t batch = 10;
  double eps = 1e-5;
  double param_scale = 1.0;
  std::size_t per_tensor = 1000;
  std::uint64_t seed = 1;
};

// Random contexts with history, text and out-of-text events.
std::vector<ConditionalInstance> random_instances(std::size_t n, std::size_t vocab,
                                                  std::size_t tokens, Rng& rng);

// Summed loss over the batch, dropout active.
GradCheckResult check_event_lm_gradients(const GradCheckSetup& setup);
GradCheckResult check_conditional_gradients(const GradCheckSetup& setup, TextMode mode, bool oot);

}  // namespace scriptcausal
