#include "scriptcausal/event_core.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "scriptcausal/errors.hpp"

namespace scriptcausal {

namespace {

constexpr std::string_view kVocabMagic = "#scriptcausal-vocab v1";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::uint64_t parse_u64(const std::string& text, const std::string& context) {
  if (text.empty() || !std::all_of(text.begin(), text.end(),
                                   [](unsigned char c) { return std::isdigit(c); })) {
    throw_format(context + ": expected a non-negative integer, got '" + text + "'");
  }
  return std::stoull(text);
}

}  // namespace

std::string_view to_string(Factuality f) {
  switch (f) {
    case Factuality::positive:
      return "pos";
    case Factuality::uncertain:
      return "unc";
    case Factuality::negative:
      return "neg";
  }
  return "pos";
}

Factuality parse_factuality(std::string_view label) {
  if (label == "pos") return Factuality::positive;
  if (label == "unc") return Factuality::uncertain;
  if (label == "neg") return Factuality::negative;
  throw_format("unknown factuality label '" + std::string(label) + "'");
}

void validate_event_field(std::string_view field, std::string_view what) {
  if (field.empty()) throw_invalid(std::string(what) + " must be non-empty");
  for (unsigned char c : field) {
    if (c == ':' || std::isspace(c)) {
      throw_invalid(std::string(what) + " '" + std::string(field) +
                    "' contains ':' or whitespace");
    }
  }
}

std::string make_event_key(std::string_view predicate, std::string_view relation) {
  validate_event_field(predicate, "predicate");
  validate_event_field(relation, "relation");
  std::string key;
  key.reserve(predicate.size() + relation.size() + 1);
  key.append(predicate).append(":").append(relation);
  return key;
}

std::string EventType::key() const { return make_event_key(predicate, relation); }

EventType EventType::from_key(std::string_view key) {
  const auto colon = key.find(':');
  if (colon == std::string_view::npos || key.find(':', colon + 1) != std::string_view::npos) {
    throw_invalid("event key '" + std::string(key) + "' is not predicate:relation");
  }
  EventType e{std::string(key.substr(0, colon)), std::string(key.substr(colon + 1)),
              Factuality::positive};
  validate_event_field(e.predicate, "predicate");
  validate_event_field(e.relation, "relation");
  return e;
}

// ---------------------------------------------------------------------------

VocabularyBuilder::VocabularyBuilder() {
  for (auto special : {kUnkKey, kStartKey, kEndKey}) {
    index_.emplace(std::string(special), static_cast<EventId>(keys_.size()));
    keys_.emplace_back(special);
    counts_.push_back(0);
  }
}

EventId VocabularyBuilder::intern(std::string_view predicate, std::string_view relation) {
  return intern_key(make_event_key(predicate, relation));
}

EventId VocabularyBuilder::intern_key(std::string_view key) {
  EventType::from_key(key);  // validates
  std::string owned(key);
  auto it = index_.find(owned);
  if (it != index_.end()) {
    ++counts_[it->second];
    return it->second;
  }
  const auto id = static_cast<EventId>(keys_.size());
  index_.emplace(owned, id);
  keys_.push_back(std::move(owned));
  counts_.push_back(1);
  return id;
}

EventId VocabularyBuilder::mention_key(std::string_view key) {
  EventType::from_key(key);
  std::string owned(key);
  auto it = index_.find(owned);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<EventId>(keys_.size());
  index_.emplace(owned, id);
  keys_.push_back(std::move(owned));
  counts_.push_back(0);
  return id;
}

Vocabulary VocabularyBuilder::finalize(std::uint64_t min_count) const {
  if (min_count < 1) throw_invalid("min_count must be at least 1");
  Vocabulary vocab;
  vocab.min_count_ = min_count;
  std::uint64_t unk = 0;
  for (std::size_t id = kNumSpecialIds; id < keys_.size(); ++id) {
    if (counts_[id] >= min_count || counts_[id] == 0) {
      vocab.add(keys_[id], counts_[id]);
    } else {
      unk += counts_[id];
    }
  }
  vocab.counts_[kUnkId] = unk;
  return vocab;
}

// ---------------------------------------------------------------------------

Vocabulary::Vocabulary() {
  for (auto special : {kUnkKey, kStartKey, kEndKey}) add(std::string(special), 0);
}

void Vocabulary::add(std::string key, std::uint64_t count) {
  const auto id = static_cast<EventId>(keys_.size());
  if (!index_.emplace(key, id).second) throw_format("duplicate vocabulary key '" + key + "'");
  keys_.push_back(std::move(key));
  counts_.push_back(count);
}

std::optional<EventId> Vocabulary::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EventId Vocabulary::lookup(std::string_view key) const { return find(key).value_or(kUnkId); }

void Vocabulary::write(std::ostream& out) const {
  out << kVocabMagic << '\t' << keys_.size() << '\t' << min_count_ << '\n';
  for (std::size_t id = 0; id < keys_.size(); ++id) {
    out << keys_[id] << '\t' << id << '\t' << counts_[id] << '\n';
  }
}

Vocabulary Vocabulary::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw_format("vocabulary: empty file");
  auto header = split_tabs(line);
  if (header.size() != 3 || header[0] != kVocabMagic) {
    throw_format("vocabulary: bad header line '" + line + "'");
  }
  const auto size = parse_u64(header[1], "vocabulary header size");
  Vocabulary vocab;
  vocab.keys_.clear();
  vocab.counts_.clear();
  vocab.index_.clear();
  vocab.min_count_ = parse_u64(header[2], "vocabulary header min_count");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    const std::string where = "vocabulary line " + std::to_string(line_no);
    if (fields.size() != 3) throw_format(where + ": expected key\\tid\\tcount");
    const auto id = parse_u64(fields[1], where);
    if (id != vocab.keys_.size()) throw_format(where + ": ids must be dense and ascending");
    if (id < kNumSpecialIds) {
      const std::string_view expected[] = {kUnkKey, kStartKey, kEndKey};
      if (fields[0] != expected[id]) throw_format(where + ": special ids must come first");
    } else {
      try {
        EventType::from_key(fields[0]);
      } catch (const InvalidArgument& e) {
        throw_format(where + ": " + e.what());
      }
    }
    vocab.add(fields[0], parse_u64(fields[2], where));
  }
  if (vocab.keys_.size() != size || size < kNumSpecialIds) {
    throw_format("vocabulary: header declares " + std::to_string(size) + " ids, found " +
                 std::to_string(vocab.keys_.size()));
  }
  return vocab;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_invalid("cannot open '" + path + "' for writing");
  write(out);
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_invalid("cannot open vocabulary '" + path + "'");
  return read(in);
}

// ---------------------------------------------------------------------------

FrequencyRank frequency_rank(const Vocabulary& vocab) {
  FrequencyRank rank;
  for (EventId id = kNumSpecialIds; id < vocab.size(); ++id)
    if (vocab.is_chain_event(id)) rank.push_back(id);
  std::stable_sort(rank.begin(), rank.end(), [&](EventId a, EventId b) {
    return vocab.count(a) > vocab.count(b);
  });
  return rank;
}

std::vector<bool> top_frequency_mask(const FrequencyRank& rank, std::size_t vocab_size,
                                     std::size_t top) {
  std::vector<bool> mask(vocab_size, false);
  for (std::size_t i = 0; i < std::min(top, rank.size()); ++i) mask.at(rank[i]) = true;
  return mask;
}

// ---------------------------------------------------------------------------

TokenVocabulary::TokenVocabulary() : TokenVocabulary(std::vector<std::string>{}) {}

TokenVocabulary::TokenVocabulary(std::vector<std::string> tokens) {
  if (tokens.empty() || tokens.front() != kUnkKey) tokens.insert(tokens.begin(), std::string(kUnkKey));
  tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<std::uint32_t>(i)).second) {
      throw_invalid("duplicate token '" + tokens_[i] + "'");
    }
  }
}

std::uint32_t TokenVocabulary::lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? 0u : it->second;
}

}  // namespace scriptcausal
