#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "scriptcausal/conditional_model.hpp"
#include "scriptcausal/event_core.hpp"
#include "scriptcausal/tensor.hpp"

namespace scriptcausal {

// Contexts (history, text, out-of-text events) over which the intervened
// prev event is averaged.
struct AdjustmentSet {
  std::vector<ConditionalContext> contexts;
  std::uint64_t seed = 0;
};

// Seeded sample of n instance contexts without replacement (all of them, in
// order, when n equals the instance count).
AdjustmentSet sample_adjustment_set(std::span<const ConditionalInstance> instances, std::size_t n,
                                    std::uint64_t seed);

// Row k estimates p(e_i | do(e_{i-1} = k)) for every vocabulary id k.
struct InterventionTable {
  Tensor effect;  // vocab x vocab
  std::string model_id;
  std::uint64_t seed = 0;
  std::size_t samples = 0;

  std::size_t size() const { return effect.rows(); }

  friend bool operator==(const InterventionTable&, const InterventionTable&) = default;
};

// Plugin estimate: row k averages the model's distribution over the
// adjustment contexts with prev replaced by k. Rows are computed
// independently, so the result does not depend on the thread count.
InterventionTable estimate_interventions(const ConditionalModel& model, const AdjustmentSet& set,
                                         const std::string& model_id, std::size_t threads = 1);

// Binary: header line `#scriptcausal-itable v1 <size> <samples> <seed> <model-id>`
// then size*size little-endian f64 values, row-major.
void write_itable(std::ostream& out, const InterventionTable& table);
InterventionTable read_itable(std::istream& in, const std::string& source = "<stream>");
void save_itable(const std::string& path, const InterventionTable& table);
InterventionTable load_itable(const std::string& path);
// Inspection export: `k_key \t l_key \t effect` for chain events.
void write_itable_tsv(std::ostream& out, const InterventionTable& table, const Vocabulary& vocab);

// S(k, l) = effect[k][l] / sum_j effect[j][l], j ranging over events where
// mask is true; 0 when the column sum is 0 or k is outside the mask.
class ScriptScores {
 public:
  ScriptScores(const InterventionTable& table, std::vector<bool> event_mask);

  double operator()(EventId k, EventId l) const;
  std::size_t size() const { return mask_.size(); }
  const std::vector<bool>& mask() const { return mask_; }

 private:
  const InterventionTable* table_;
  std::vector<bool> mask_;
  std::vector<double> column_sums_;
};

std::vector<bool> chain_event_mask(const Vocabulary& vocab);

double script_score(const InterventionTable& table, const std::vector<bool>& event_mask, EventId k,
                    EventId l);

using PairScore = std::function<double(EventId, EventId)>;

// Candidates: events in rank minus the exclude_top most frequent ones.
std::vector<EventId> candidate_events(const FrequencyRank& rank, std::size_t exclude_top);

// Events k maximizing score(k, l) among the candidates; ties by ascending id.
std::vector<EventId> top_predecessors(const PairScore& score, EventId l, std::size_t topk,
                                      std::size_t exclude_top, const FrequencyRank& rank);

// Candidates ranked by the mean of score(c, candidate) over the context
// events c, best first, ties by ascending id. Returns at most n.
std::vector<EventId> rank_completions(const PairScore& score, std::span<const EventId> context,
                                      std::size_t n, std::size_t exclude_top,
                                      const FrequencyRank& rank);

// Best completion of the context (first entry of rank_completions).
EventId complete_chain(const PairScore& score, std::span<const EventId> context,
                       std::size_t exclude_top, const FrequencyRank& rank);

}  // namespace scriptcausal
