#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "scriptcausal/event_core.hpp"

namespace scriptcausal {

// Directed skip-bigram counts: (a, b) counts a occurring before b within the
// window. Marginals are taken over counted pairs.
struct OrderedCounts {
  std::size_t window = 2;
  bool self_pairs = true;
  std::map<std::pair<EventId, EventId>, std::uint64_t> pairs;
  std::vector<std::uint64_t> left_totals;
  std::vector<std::uint64_t> right_totals;
  std::uint64_t grand_total = 0;

  std::uint64_t count(EventId a, EventId b) const;
  // Adds another table with the same settings and vocabulary size.
  void merge(const OrderedCounts& other);

  friend bool operator==(const OrderedCounts&, const OrderedCounts&) = default;
};

// For every chain and position i, counts (e_i, e_j) for i < j <= i + window.
// Work is sharded over chains and merged in shard order.
OrderedCounts count_skip_bigrams(std::span<const std::vector<EventId>> chains,
                                 std::size_t vocab_size, std::size_t window = 2,
                                 bool self_pairs = true, std::size_t threads = 1);

// ln[(c/T) / ((left/T)(right/T))]; the discounted form multiplies by
// (c/(c+1)) * (m/(m+1)) with m = min(left(a), right(b)). Returns -infinity
// when the pair was never counted.
double ordered_pmi(const OrderedCounts& counts, EventId a, EventId b, bool discounted);

// TSV: a header line with window, self-pair flag and totals, then
// `a_key \t b_key \t count` per pair in id order.
void write_counts(std::ostream& out, const OrderedCounts& counts, const Vocabulary& vocab);
OrderedCounts read_counts(std::istream& in, const Vocabulary& vocab, const std::string& source);

}  // namespace scriptcausal
