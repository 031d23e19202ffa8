#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scriptcausal {

using EventId = std::uint32_t;

inline constexpr EventId kUnkId = 0;
inline constexpr EventId kStartId = 1;
inline constexpr EventId kEndId = 2;
inline constexpr std::size_t kNumSpecialIds = 3;

inline constexpr std::string_view kUnkKey = "<unk>";
inline constexpr std::string_view kStartKey = "<s>";
inline constexpr std::string_view kEndKey = "</s>";

inline constexpr bool is_special(EventId id) { return id < kNumSpecialIds; }

enum class Factuality { positive, uncertain, negative };

// "pos" / "unc" / "neg".
std::string_view to_string(Factuality f);
Factuality parse_factuality(std::string_view label);

// An atomic event: the protagonist's dependency relation to a predicate.
// Identity is the (predicate, relation) pair; factuality only drives
// ingestion-time filtering.
struct EventType {
  std::string predicate;
  std::string relation;
  Factuality factuality = Factuality::positive;

  // "predicate:relation".
  std::string key() const;
  // Inverse of key(); factuality defaults to positive.
  static EventType from_key(std::string_view key);

  friend bool operator==(const EventType& a, const EventType& b) {
    return a.predicate == b.predicate && a.relation == b.relation &&
           a.factuality == b.factuality;
  }
};

// Throws InvalidArgument unless the field is non-empty and free of
// whitespace and ':'.
void validate_event_field(std::string_view field, std::string_view what);
std::string make_event_key(std::string_view predicate, std::string_view relation);

class Vocabulary;

// Building phase of a vocabulary. Single writer.
class VocabularyBuilder {
 public:
  VocabularyBuilder();

  EventId intern(std::string_view predicate, std::string_view relation);
  // Same as intern() for an already joined "predicate:relation" key.
  EventId intern_key(std::string_view key);
  // Registers a key without counting an occurrence. Keys that are only ever
  // mentioned survive finalize() with count 0 (auxiliary events such as
  // out-of-text annotations).
  EventId mention_key(std::string_view key);

  std::size_t size() const { return keys_.size(); }
  std::uint64_t count(EventId id) const { return counts_.at(id); }

  // Drops events seen fewer than min_count times (they resolve to <unk>)
  // and re-densifies the surviving ids in first-seen order. Mentioned-only
  // keys are kept.
  Vocabulary finalize(std::uint64_t min_count) const;

 private:
  std::vector<std::string> keys_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, EventId> index_;
};

// Finalized, immutable event vocabulary. Ids are dense in [0, size()), with
// the three special ids first.
class Vocabulary {
 public:
  Vocabulary();

  std::size_t size() const { return keys_.size(); }
  std::size_t num_events() const { return keys_.size() - kNumSpecialIds; }
  std::uint64_t min_count() const { return min_count_; }

  const std::string& key(EventId id) const { return keys_.at(id); }
  std::uint64_t count(EventId id) const { return counts_.at(id); }
  // Non-special id observed in chains (auxiliary keys have count 0).
  bool is_chain_event(EventId id) const { return !is_special(id) && id < size() && counts_[id] > 0; }
  std::optional<EventId> find(std::string_view key) const;
  // Unknown keys resolve to <unk>.
  EventId lookup(std::string_view key) const;

  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in);
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.keys_ == b.keys_ && a.counts_ == b.counts_ && a.min_count_ == b.min_count_;
  }

 private:
  friend class VocabularyBuilder;
  void add(std::string key, std::uint64_t count);

  std::vector<std::string> keys_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, EventId> index_;
  std::uint64_t min_count_ = 1;
};

// Chain-event ids by descending count, ties by ascending id.
using FrequencyRank = std::vector<EventId>;

FrequencyRank frequency_rank(const Vocabulary& vocab);

// Ids of the `top` most frequent events as a membership mask over the
// vocabulary.
std::vector<bool> top_frequency_mask(const FrequencyRank& rank, std::size_t vocab_size,
                                     std::size_t top);

// Text token vocabulary for event descriptions; id 0 is the unknown token.
class TokenVocabulary {
 public:
  TokenVocabulary();
  explicit TokenVocabulary(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::uint32_t lookup(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace scriptcausal
