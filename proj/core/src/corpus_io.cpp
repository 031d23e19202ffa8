#include "scriptcausal/corpus_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/rng.hpp"

namespace scriptcausal {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw_format(std::string("missing field '") + field + "'");
  return *it;
}

std::string require_string(const json& obj, const char* field) {
  const auto& v = require(obj, field);
  if (!v.is_string()) throw_format(std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

ChainEvent parse_event(const json& j) {
  if (!j.is_object()) throw_format("event must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "pred" && k != "dep" && k != "fact" && k != "text" && k != "oot") {
      throw_format("unknown event field '" + k + "'");
    }
  }
  ChainEvent ev;
  ev.event.predicate = require_string(j, "pred");
  ev.event.relation = require_string(j, "dep");
  try {
    validate_event_field(ev.event.predicate, "pred");
    validate_event_field(ev.event.relation, "dep");
  } catch (const InvalidArgument& e) {
    throw_format(e.what());
  }
  ev.event.factuality = parse_factuality(require_string(j, "fact"));
  if (auto it = j.find("text"); it != j.end()) {
    if (!it->is_array() || it->empty()) throw_format("'text' must be a non-empty array");
    std::vector<std::string> tokens;
    for (const auto& t : *it) {
      if (!t.is_string() || t.get<std::string>().empty()) {
        throw_format("'text' entries must be non-empty strings");
      }
      tokens.push_back(t.get<std::string>());
    }
    ev.text = std::move(tokens);
  }
  if (auto it = j.find("oot"); it != j.end()) {
    if (!it->is_array()) throw_format("'oot' must be an array");
    std::vector<OotCandidate> cands;
    for (const auto& c : *it) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_number_integer()) {
        throw_format("'oot' entries must be [key, rating]");
      }
      OotCandidate cand{c[0].get<std::string>(), c[1].get<int>()};
      if (cand.rating < 0 || cand.rating > 4) {
        throw_format("oot rating " + std::to_string(cand.rating) + " outside [0,4]");
      }
      try {
        EventType::from_key(cand.key);
      } catch (const InvalidArgument& e) {
        throw_format(e.what());
      }
      cands.push_back(std::move(cand));
    }
    ev.oot = std::move(cands);
  }
  return ev;
}

EventChain parse_chain(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw_format(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw_format("record must be a JSON object");
  EventChain chain;
  chain.chain_id = require_string(j, "chain_id");
  if (chain.chain_id.empty()) throw_format("empty chain_id");
  const auto& events = require(j, "events");
  if (!events.is_array() || events.empty()) throw_format("'events' must be a non-empty array");
  for (const auto& e : events) chain.events.push_back(parse_event(e));
  return chain;
}

}  // namespace

std::size_t ChainCorpus::num_events() const {
  std::size_t n = 0;
  for (const auto& c : chains) n += c.events.size();
  return n;
}

ChainCorpus read_chains(std::istream& in, bool factual_only, const std::string& source) {
  ChainCorpus corpus;
  corpus.provenance = source;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    EventChain chain;
    try {
      chain = parse_chain(line);
    } catch (const FormatError& e) {
      throw_format(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(chain.chain_id).second) {
      throw_format(source + ":" + std::to_string(line_no) + ": duplicate chain_id '" +
                   chain.chain_id + "'");
    }
    if (factual_only) {
      std::erase_if(chain.events, [](const ChainEvent& e) {
        return e.event.factuality != Factuality::positive;
      });
      if (chain.events.empty()) continue;
    }
    corpus.chains.push_back(std::move(chain));
  }
  return corpus;
}

ChainCorpus load_chains(const std::string& path, bool factual_only) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_invalid("cannot open chain file '" + path + "'");
  return read_chains(in, factual_only, path);
}

std::string chain_to_json(const EventChain& chain) {
  ordered_json j;
  j["chain_id"] = chain.chain_id;
  auto events = ordered_json::array();
  for (const auto& ev : chain.events) {
    ordered_json e;
    e["pred"] = ev.event.predicate;
    e["dep"] = ev.event.relation;
    e["fact"] = std::string(to_string(ev.event.factuality));
    if (ev.text) e["text"] = *ev.text;
    if (ev.oot) {
      auto oot = ordered_json::array();
      for (const auto& c : *ev.oot) oot.push_back(ordered_json::array({c.key, c.rating}));
      e["oot"] = std::move(oot);
    }
    events.push_back(std::move(e));
  }
  j["events"] = std::move(events);
  return j.dump();
}

void write_chains(std::ostream& out, const ChainCorpus& corpus) {
  for (const auto& chain : corpus.chains) out << chain_to_json(chain) << '\n';
}

void save_chains(const std::string& path, const ChainCorpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_invalid("cannot open '" + path + "' for writing");
  write_chains(out, corpus);
}

CorpusSplit split_corpus(const ChainCorpus& corpus, const std::array<double, 3>& ratios,
                         std::uint64_t seed) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw_invalid("split ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw_invalid("split ratios must sum to 1");
  const std::size_t n = corpus.chains.size();
  if (n < ratios.size()) {
    throw_invalid("cannot split " + std::to_string(n) + " chains into " +
                  std::to_string(ratios.size()) + " parts");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::array<std::size_t, 4> bounds{0, 0, 0, n};
  double cum = 0.0;
  for (std::size_t p = 0; p + 1 < ratios.size(); ++p) {
    cum += ratios[p];
    auto b = static_cast<std::size_t>(std::llround(cum * static_cast<double>(n)));
    const std::size_t lo = bounds[p] + 1;
    const std::size_t hi = n - (ratios.size() - 1 - p);
    bounds[p + 1] = std::clamp(b, lo, hi);
  }

  CorpusSplit split;
  ChainCorpus* parts[] = {&split.train, &split.dev, &split.test};
  const char* names[] = {"train", "dev", "test"};
  for (std::size_t p = 0; p < 3; ++p) {
    std::vector<std::size_t> members(order.begin() + bounds[p], order.begin() + bounds[p + 1]);
    std::sort(members.begin(), members.end());
    parts[p]->provenance = corpus.provenance + " [" + names[p] + "]";
    for (auto i : members) parts[p]->chains.push_back(corpus.chains[i]);
  }
  return split;
}

Vocabulary build_vocab_from(const ChainCorpus& corpus, std::uint64_t min_count) {
  VocabularyBuilder builder;
  for (const auto& chain : corpus.chains) {
    for (const auto& ev : chain.events) {
      builder.intern(ev.event.predicate, ev.event.relation);
      if (ev.oot) {
        for (const auto& c : *ev.oot) builder.mention_key(c.key);
      }
    }
  }
  return builder.finalize(min_count);
}

TokenVocabulary build_token_vocab(const ChainCorpus& corpus, std::uint64_t min_count) {
  if (min_count < 1) throw_invalid("min_count must be at least 1");
  std::vector<std::string> order;
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& chain : corpus.chains) {
    for (const auto& ev : chain.events) {
      if (!ev.text) continue;
      for (const auto& tok : *ev.text) {
        if (tok == kUnkKey) continue;
        if (counts[tok]++ == 0) order.push_back(tok);
      }
    }
  }
  std::vector<std::string> kept;
  for (auto& tok : order) {
    if (counts[tok] >= min_count) kept.push_back(std::move(tok));
  }
  return TokenVocabulary(std::move(kept));
}

std::vector<EventId> chain_ids(const EventChain& chain, const Vocabulary& vocab) {
  std::vector<EventId> ids;
  ids.reserve(chain.events.size());
  for (const auto& ev : chain.events) ids.push_back(vocab.lookup(ev.event.key()));
  return ids;
}

}  // namespace scriptcausal
