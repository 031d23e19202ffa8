#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scriptcausal/event_core.hpp"
#include "scriptcausal/tensor.hpp"

namespace scriptcausal {

class Rng;

struct GruParams {
  Tensor w_z, w_r, w_h;  // hidden x input
  Tensor u_z, u_r, u_h;  // hidden x hidden
  Tensor b_z, b_r, b_h;  // hidden

  static GruParams zeros(std::size_t input, std::size_t hidden);
  // Xavier matrices, zero biases.
  static GruParams random(std::size_t input, std::size_t hidden, Rng& rng);

  std::size_t input_dim() const { return w_z.cols(); }
  std::size_t hidden_dim() const { return w_z.rows(); }

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    f(prefix + "w_z", w_z); f(prefix + "w_r", w_r); f(prefix + "w_h", w_h);
    f(prefix + "u_z", u_z); f(prefix + "u_r", u_r); f(prefix + "u_h", u_h);
    f(prefix + "b_z", b_z); f(prefix + "b_r", b_r); f(prefix + "b_h", b_h);
  }
};

// Intermediate values of one step, kept for the backward pass.
struct GruStepCache {
  std::vector<double> x, h_prev, z, r, cand, h;
};

std::vector<double> gru_step(const GruParams& p, std::span<const double> x,
                             std::span<const double> h_prev);
void gru_step(const GruParams& p, std::span<const double> x,
              std::span<const double> h_prev, GruStepCache& cache);

// Accumulates parameter gradients into grad and writes dL/dx, dL/dh_prev
// (overwritten, not accumulated). dx may be empty when not needed.
void gru_step_backward(const GruParams& p, const GruStepCache& cache,
                       std::span<const double> dh, GruParams& grad,
                       std::span<double> dx, std::span<double> dh_prev);

// Runs the cell over a sequence of inputs from a zero state.
std::vector<GruStepCache> gru_forward(const GruParams& p,
                                      const std::vector<std::vector<double>>& inputs);
// dh_out[t] is the loss gradient arriving directly at the output of step t.
// Returns dL/dx_t for every step.
std::vector<std::vector<double>> gru_backward(const GruParams& p,
                                              const std::vector<GruStepCache>& steps,
                                              const std::vector<std::vector<double>>& dh_out,
                                              GruParams& grad);

// Final hidden state after folding gru_step over the embedded ids.
std::vector<double> encode_sequence(const GruParams& p, const Tensor& embeddings,
                                    std::span<const EventId> ids);

}  // namespace scriptcausal
