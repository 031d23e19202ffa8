#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scriptcausal/corpus_io.hpp"
#include "scriptcausal/event_core.hpp"
#include "scriptcausal/synth.hpp"

namespace testing {

// One chain per inner list; every event is "<name>:nsubj" and factual.
inline scriptcausal::ChainCorpus make_corpus(const std::vector<std::vector<std::string>>& chains) {
  scriptcausal::ChainCorpus corpus;
  corpus.provenance = "unit";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    scriptcausal::EventChain chain;
    chain.chain_id = "c" + std::to_string(c);
    for (const auto& name : chains[c]) {
      scriptcausal::ChainEvent ev;
      ev.event.predicate = name;
      ev.event.relation = "nsubj";
      chain.events.push_back(ev);
    }
    corpus.chains.push_back(std::move(chain));
  }
  return corpus;
}

inline scriptcausal::ChainCorpus parse_corpus(const std::string& text, bool factual_only) {
  std::istringstream in(text);
  return scriptcausal::read_chains(in, factual_only, "unit");
}

inline double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return s;
}

// Interventional rows sum_z prior(z) g_z(.|k) evaluated straight from a
// fixture parameter file, without the library loader.
struct DoOracle {
  std::vector<std::string> events;
  std::vector<std::vector<double>> effect;
};

inline DoOracle do_oracle(const std::string& file) {
  std::ifstream in(scriptcausal::fixture_dir() + "/" + file);
  const auto doc = nlohmann::json::parse(in);
  const double smoothing = doc["smoothing"];
  DoOracle o;
  o.events = doc["events"].get<std::vector<std::string>>();
  const std::size_t n = o.events.size();
  o.effect.assign(n, std::vector<double>(n, 0.0));
  for (const auto& sc : doc["scenarios"]) {
    const double prior = sc["prior"];
    const auto& kernel = sc["kernel"];
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> w(n, 0.0);
      for (const char* key : {"*", o.events[k].c_str()}) {
        if (!kernel.contains(key)) continue;
        for (std::size_t l = 0; l < n; ++l)
          if (kernel[key].contains(o.events[l])) w[l] += kernel[key][o.events[l]].get<double>();
      }
      double total = 0.0;
      for (double x : w) total += x;
      for (std::size_t l = 0; l < n; ++l)
        o.effect[k][l] += prior * ((1.0 - smoothing) * w[l] / total + smoothing / static_cast<double>(n));
    }
  }
  return o;
}

}  // namespace testing
