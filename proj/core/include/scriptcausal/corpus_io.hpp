#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scriptcausal/event_core.hpp"

namespace scriptcausal {

// An annotated out-of-text event candidate with its ordinal rating (0..4).
struct OotCandidate {
  std::string key;
  int rating = 0;

  friend bool operator==(const OotCandidate&, const OotCandidate&) = default;
};

struct ChainEvent {
  EventType event;
  // Lowercase tokens of the event's textual description, when available.
  std::optional<std::vector<std::string>> text;
  std::optional<std::vector<OotCandidate>> oot;

  friend bool operator==(const ChainEvent&, const ChainEvent&) = default;
};

// Protagonist events in document order, which is taken as temporal order.
struct EventChain {
  std::string chain_id;
  std::vector<ChainEvent> events;

  friend bool operator==(const EventChain&, const EventChain&) = default;
};

struct ChainCorpus {
  std::vector<EventChain> chains;
  std::string provenance;

  std::size_t num_events() const;
};

// One JSON record per line:
//   {"chain_id":"c1","events":[{"pred":"eat","dep":"nsubj","fact":"pos",
//     "text":["he","ate"],"oot":[["order:nsubj",4]]}]}
// `text` and `oot` are optional. With factual_only, events whose factuality
// is not positive are removed and chains left empty are dropped.
ChainCorpus read_chains(std::istream& in, bool factual_only, const std::string& source);
ChainCorpus load_chains(const std::string& path, bool factual_only);

// Canonical writer: keys in schema order, no insignificant whitespace.
void write_chains(std::ostream& out, const ChainCorpus& corpus);
void save_chains(const std::string& path, const ChainCorpus& corpus);
std::string chain_to_json(const EventChain& chain);

struct CorpusSplit {
  ChainCorpus train;
  ChainCorpus dev;
  ChainCorpus test;
};

// Seeded chain-level partition. Ratios must be positive and sum to 1; every
// part receives at least one chain. Chains keep their corpus order inside
// each part.
CorpusSplit split_corpus(const ChainCorpus& corpus, const std::array<double, 3>& ratios,
                         std::uint64_t seed);

// Interns every chain event, registers every out-of-text candidate key
// without counting it, then finalizes with min_count.
Vocabulary build_vocab_from(const ChainCorpus& corpus, std::uint64_t min_count);

TokenVocabulary build_token_vocab(const ChainCorpus& corpus, std::uint64_t min_count);

// Chain as vocabulary ids (unknown events map to <unk>).
std::vector<EventId> chain_ids(const EventChain& chain, const Vocabulary& vocab);

}  // namespace scriptcausal
