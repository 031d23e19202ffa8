#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scriptcausal/corpus_io.hpp"
#include "scriptcausal/event_core.hpp"
#include "scriptcausal/gru.hpp"
#include "scriptcausal/model_io.hpp"
#include "scriptcausal/text_encoder.hpp"

namespace scriptcausal {

inline constexpr std::size_t kHistoryWindow = 10;

struct ConditionalContext {
  EventId prev = kUnkId;
  std::vector<EventId> history;  // at most kHistoryWindow events before prev
  std::vector<std::uint32_t> text;  // tokens describing prev
  std::vector<EventId> oot;  // admitted out-of-text events

  friend bool operator==(const ConditionalContext&, const ConditionalContext&) = default;
};

struct ConditionalInstance {
  EventId target = kUnkId;
  ConditionalContext context;
  std::size_t chain = 0;  // index in the source corpus
  std::size_t position = 0;  // index of target in the chain, >= 1
};

// One instance per chain position i >= 1 (positions counted from 0): target
// e_i, prev e_{i-1}, history the up-to-`window` events before e_{i-1}, text
// and out-of-text candidates taken from e_{i-1}. Out-of-text candidates attached to the
// previous event are admitted when rated >= oot_threshold; keys unknown to
// the vocabulary are skipped.
std::vector<ConditionalInstance> extract_training_instances(const ChainCorpus& corpus,
                                                            const Vocabulary& vocab,
                                                            const TokenVocabulary& tokens,
                                                            int oot_threshold,
                                                            std::size_t window = kHistoryWindow);

enum class ModelPhase { pretrained, finetuned };

struct ConditionalParams {
  Tensor event_embeddings;  // vocab x dim
  GruParams encoder;  // dim -> hidden
  TextEncoderParams text;  // tokens x dim
  Tensor a;  // vocab x hidden
  Tensor b;  // vocab x dim
  Tensor w_o;  // vocab x dim, finetuned phase only

  bool has_oot() const { return w_o.size() > 0; }

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    f(prefix + "event_embeddings", event_embeddings);
    encoder.visit(prefix + "encoder.", f);
    text.visit(prefix + "text.", f);
    f(prefix + "a", a);
    f(prefix + "b", b);
    if (has_oot()) f(prefix + "w_o", w_o);
  }
};

// Precomputed per-context pieces that do not depend on prev, used when the
// same context is queried with many substituted prev events.
struct ContextPrefix {
  std::vector<double> history_state;  // encoder state after the history
  std::vector<double> base_logits;  // B v_t (+ W_O v_o)
};

// logits = A v_e + B v_t (+ W_O v_o once finetuned), where v_e encodes
// [history..., prev], v_t encodes the text and v_o averages the embeddings of
// the out-of-text events (zero when there are none).
class ConditionalModel {
 public:
  ConditionalModel() = default;
  ConditionalModel(std::size_t vocab_size, std::vector<std::string> tokens, std::size_t dim,
                   std::size_t hidden, TextMode mode, std::uint64_t seed);

  ModelPhase phase() const { return params_.has_oot() ? ModelPhase::finetuned : ModelPhase::pretrained; }
  std::size_t vocab_size() const { return params_.a.rows(); }
  std::size_t dim() const { return params_.event_embeddings.cols(); }
  std::size_t hidden() const { return params_.encoder.hidden_dim(); }
  TextMode text_mode() const { return params_.text.mode; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  TokenVocabulary token_vocabulary() const { return TokenVocabulary(tokens_); }
  ConditionalParams& params() { return params_; }
  const ConditionalParams& params() const { return params_; }

  // Adds a zero W_O; outputs are unchanged until it is trained.
  void begin_finetune();

  std::vector<double> logits(const ConditionalContext& ctx) const;
  std::vector<double> distribution(const ConditionalContext& ctx) const;

  ContextPrefix prefix(const ConditionalContext& ctx) const;
  // Distribution for the context behind `pre` with prev replaced by `prev`.
  std::vector<double> distribution_with_prev(const ContextPrefix& pre, EventId prev) const;

  // Summed cross-entropy over the instances divided by normalizer (count
  // when 0); accumulates the gradient when grad is non-null. Out-of-text
  // events are ignored in the pretrained phase.
  double loss(std::span<const ConditionalInstance> instances, ConditionalParams* grad,
              double normalizer = 0.0) const;

  ModelFile to_file() const;
  static ConditionalModel from_file(const ModelFile& file);

  // Runs of instances sharing one encoder pass: each instance's encoder
  // input extends the previous one by exactly one event.
  struct Run {
    std::vector<EventId> sequence;
    std::vector<std::size_t> members;  // instance indices, one per final steps
  };
  static std::vector<Run> group_runs(std::span<const ConditionalInstance> instances);
  // Loss of one run (same conventions as loss()).
  double run_loss(const Run& run, std::span<const ConditionalInstance> instances,
                  ConditionalParams* grad, double scale) const;

 private:
  std::vector<double> text_and_oot(const ConditionalContext& ctx) const;
  void check_context(const ConditionalContext& ctx) const;

  ConditionalParams params_;
  std::vector<std::string> tokens_;
};

struct ConditionalConfig {
  std::size_t dim = 300;
  std::size_t hidden = 300;
  TextMode text_mode = TextMode::mean;
  double lr = 1e-3;
  double finetune_lr = 1e-5;
  double clip_norm = 10.0;
  std::size_t batch_size = 512;
  std::size_t patience = 3;
  std::size_t max_epochs = 50;
  std::size_t finetune_max_epochs = 50;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct ConditionalTrainReport {
  std::vector<double> train_loss;
  std::vector<double> dev_loss;
  std::size_t best_epoch = 0;  // 0 means the starting point was kept
};

// Pretraining on instances without out-of-text events; early stopping on the
// dev loss with the best checkpoint returned.
ConditionalModel train_conditional(std::span<const ConditionalInstance> train,
                                   std::span<const ConditionalInstance> dev,
                                   std::size_t vocab_size, std::vector<std::string> tokens,
                                   const ConditionalConfig& config,
                                   ConditionalTrainReport* report = nullptr);

// Introduces W_O and trains every parameter at finetune_lr. The starting
// model is itself a candidate checkpoint.
ConditionalModel finetune_with_oot(const ConditionalModel& model,
                                   std::span<const ConditionalInstance> train,
                                   std::span<const ConditionalInstance> dev,
                                   const ConditionalConfig& config,
                                   ConditionalTrainReport* report = nullptr);

}  // namespace scriptcausal
