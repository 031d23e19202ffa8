#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scriptcausal/event_core.hpp"
#include "scriptcausal/gru.hpp"
#include "scriptcausal/model_io.hpp"
#include "scriptcausal/tensor.hpp"

namespace scriptcausal {

struct EventLmConfig {
  std::size_t input_dim = 300;
  std::size_t hidden = 512;
  double dropout = 0.1;  // embedding and output dropout
  double lr = 1e-3;
  double clip_norm = 10.0;
  std::size_t batch_size = 64;
  std::size_t patience = 3;
  std::size_t max_epochs = 50;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct EventLmParams {
  Tensor embeddings;  // vocab x input
  GruParams layer1;
  GruParams layer2;
  Tensor out_w;  // vocab x hidden
  Tensor out_b;  // vocab

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    f(prefix + "embeddings", embeddings);
    layer1.visit(prefix + "gru1.", f);
    layer2.visit(prefix + "gru2.", f);
    f(prefix + "out_w", out_w);
    f(prefix + "out_b", out_b);
  }
};

// Two-layer GRU language model over event ids. Sequences are framed as
// [<s>, e_1, ..., e_n, </s>].
class EventLm {
 public:
  EventLm() = default;
  EventLm(std::size_t vocab_size, std::size_t input_dim, std::size_t hidden, double dropout,
          std::uint64_t seed);

  std::size_t vocab_size() const { return params_.out_b.size(); }
  double dropout() const { return dropout_; }
  EventLmParams& params() { return params_; }
  const EventLmParams& params() const { return params_; }

  // Distribution over all vocabulary ids after reading `history` (which
  // must start with <s>).
  std::vector<double> next_distribution(std::span<const EventId> history) const;
  // log p(candidate | <s>, context).
  double chain_score(std::span<const EventId> context, EventId candidate) const;
  // log p(. | <s>, context) for every id.
  std::vector<double> chain_scores(std::span<const EventId> context) const;

  // Summed next-event cross-entropy over the framed sequences, divided by
  // `normalizer` (token count when 0). With grad non-null, accumulates the
  // matching gradient. Dropout is applied when dropout_seed is non-zero,
  // with masks derived from the seed and the sequence index.
  double loss(std::span<const std::vector<EventId>> framed, EventLmParams* grad,
              std::uint64_t dropout_seed, double normalizer = 0.0) const;

  ModelFile to_file() const;
  static EventLm from_file(const ModelFile& file);

 private:
  double sequence_loss(std::span<const EventId> seq, EventLmParams* grad, std::uint64_t mask_seed,
                       double scale) const;

  EventLmParams params_;
  double dropout_ = 0.0;
};

std::vector<EventId> frame_chain(std::span<const EventId> chain);

struct LmTrainReport {
  std::vector<double> train_loss;
  std::vector<double> dev_loss;
  std::size_t best_epoch = 0;  // 1-based
};

// Adam with early stopping on dev loss; returns the best-dev checkpoint.
// Chains are unframed id sequences.
EventLm train_event_lm(std::span<const std::vector<EventId>> train,
                       std::span<const std::vector<EventId>> dev, std::size_t vocab_size,
                       const EventLmConfig& config, LmTrainReport* report = nullptr);

}  // namespace scriptcausal
