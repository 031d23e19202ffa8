#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "scriptcausal/corpus_io.hpp"
#include "scriptcausal/event_core.hpp"
#include "scriptcausal/event_lm.hpp"
#include "scriptcausal/interventions.hpp"

namespace scriptcausal {

struct ClozeInstance {
  std::vector<EventId> context;
  EventId answer = kUnkId;
  std::string chain_id;

  friend bool operator==(const ClozeInstance&, const ClozeInstance&) = default;
};

// Seeded uniform sample (without replacement) of (chain, split point) pairs
// whose answer is a chain event; the context is the whole prefix. Instances
// come back in corpus order. Throws when fewer than count pairs exist.
std::vector<ClozeInstance> make_cloze_set(const ChainCorpus& corpus, const Vocabulary& vocab,
                                          std::size_t count, std::uint64_t seed);

// Drops instances whose answer is among the `cutoff` most frequent events.
std::vector<ClozeInstance> filter_by_cutoff(std::span<const ClozeInstance> instances,
                                            const FrequencyRank& rank, std::size_t cutoff);

class ClozeSystem {
 public:
  virtual ~ClozeSystem() = default;
  virtual std::string name() const = 0;
  // Best n candidate events for the context, best first.
  virtual std::vector<EventId> top_n(std::span<const EventId> context, std::size_t n) const = 0;
};

// Ranks chain events by the LM's next-event probability.
class LmClozeSystem : public ClozeSystem {
 public:
  LmClozeSystem(std::string name, const EventLm& lm, std::vector<bool> event_mask);
  std::string name() const override { return name_; }
  std::vector<EventId> top_n(std::span<const EventId> context, std::size_t n) const override;

 private:
  std::string name_;
  const EventLm* lm_;
  std::vector<bool> mask_;
};

// Ranks candidates by the mean pairwise score against every context event.
class PairwiseClozeSystem : public ClozeSystem {
 public:
  PairwiseClozeSystem(std::string name, PairScore score, FrequencyRank rank);
  std::string name() const override { return name_; }
  std::vector<EventId> top_n(std::span<const EventId> context, std::size_t n) const override;

 private:
  std::string name_;
  PairScore score_;
  FrequencyRank rank_;
};

// Percentage of instances whose answer is in the system's top n. Throws on
// an empty instance set.
double recall_at_n(const ClozeSystem& system, std::span<const ClozeInstance> instances,
                   std::size_t n, std::size_t threads = 1);

inline const std::vector<std::size_t> kDefaultCutoffs{0, 50, 100, 125, 150, 200, 500};
inline constexpr std::size_t kDefaultRecallN = 100;

struct ClozeReport {
  std::vector<std::size_t> cutoffs;
  std::vector<std::size_t> counts;
  std::vector<std::string> systems;
  // recall[s][c]; NaN where the cutoff leaves no instances.
  std::vector<std::vector<double>> recall;
  std::size_t n = kDefaultRecallN;

  // Largest cutoff that still leaves instances (index into cutoffs).
  std::size_t last_applicable() const;
};

ClozeReport run_infrequent_cloze(std::span<const ClozeSystem* const> systems,
                                 std::span<const ClozeInstance> instances,
                                 const FrequencyRank& rank,
                                 const std::vector<std::size_t>& cutoffs = kDefaultCutoffs,
                                 std::size_t n = kDefaultRecallN, std::size_t threads = 1);

// TSV: header `system` + one `<C` column per cutoff, an `instances` row,
// then one row per system (NA where undefined).
void write_cloze_report(std::ostream& out, const ClozeReport& report);

struct NamedPairScore {
  std::string name;
  PairScore score;
};

struct SheetRow {
  std::size_t task_id = 0;
  EventId target = kUnkId;
  EventId candidate = kUnkId;  // kUnkId when the system ran short
  std::string system;
  bool short_row = false;
};

// Seeded sample of `count` target events outside the exclude_top most
// frequent ones, in ascending id order.
std::vector<EventId> sample_targets(const FrequencyRank& rank, std::size_t count,
                                    std::size_t exclude_top, std::uint64_t seed);

// For each target, every system contributes its top per_system predecessors
// after the frequency filter; rows within a task are shuffled with the seed.
std::vector<SheetRow> pairwise_sheet(std::span<const NamedPairScore> systems,
                                     std::span<const EventId> targets, std::size_t per_system,
                                     std::size_t exclude_top, const FrequencyRank& rank,
                                     std::uint64_t seed);

// Columns: task_id, target_event, candidate_event, hidden_system_key, score,
// status. The score column is left empty for annotators.
void write_sheet(std::ostream& out, std::span<const SheetRow> rows, const Vocabulary& vocab);

struct SystemScoreSummary {
  std::string system;
  std::size_t pairs = 0;
  double mean_score = 0.0;
  double mean_rank = 0.0;  // rank of a pair's score inside its task, 1 = best
};

struct ScoreSummary {
  std::vector<SystemScoreSummary> systems;
  // Per task mean score of each system, NaN when it had no scored pair.
  std::vector<std::size_t> task_ids;
  std::vector<std::vector<double>> paired;  // [task][system]
};

// Reads a filled-in sheet; rows marked short or without a score are skipped.
ScoreSummary summarize_scores(std::istream& in, const std::string& source = "<stream>");
void write_score_summary(std::ostream& out, const ScoreSummary& summary);
void write_paired_scores(std::ostream& out, const ScoreSummary& summary);

struct DiversityStats {
  std::string system;
  std::size_t total = 0;
  std::size_t distinct = 0;
  double pct_new = 0.0;
  // Up to two most emitted outputs with their usage percentage.
  std::vector<std::pair<std::string, double>> top;
};

// Emissions are in task order. Throws on an empty sequence.
DiversityStats diversity_report(const std::string& system, std::span<const std::string> emissions);
void write_diversity(std::ostream& out, std::span<const DiversityStats> stats);

}  // namespace scriptcausal
