#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scriptcausal/corpus_io.hpp"
#include "scriptcausal/tensor.hpp"

namespace scriptcausal {

struct Scenario {
  std::string name;
  double prior = 0.0;
  std::string oot_event;  // key exposing the scenario as an annotation
  // (events + 1) x events; row `events` is the <s> row. Already smoothed.
  Tensor kernel;
};

// Scenario-confounded Markov chain generator: z ~ prior, then
// e_1..e_L ~ g_z(. | previous) starting from <s>, with
// g_z = (1 - smoothing) * template_z + smoothing / |E|.
struct SyntheticCbn {
  std::string name;
  std::size_t length = 0;
  double smoothing = 0.0;
  std::vector<std::string> events;
  std::map<std::string, std::string> roles;  // named events used by checks
  std::vector<Scenario> scenarios;

  std::size_t num_events() const { return events.size(); }
  std::size_t start_row() const { return events.size(); }
  // Index of an event key; throws InvalidArgument when unknown.
  std::size_t index(const std::string& key) const;
  std::size_t role(const std::string& name) const;
};

// CBN definition file (JSON):
//   {"format": "scriptcausal-cbn v1", "name": ..., "length": L,
//    "smoothing": lambda, "events": [keys...], "roles": {name: key},
//    "scenarios": [{"name": ..., "prior": p, "oot_event": key,
//                   "kernel": {"<s>": {key: w}, "*": {key: w}, key: {key: w}}}]}
// Template row k is the weights listed under "*" (for k != <s>) plus those
// under k, normalized. Every row must carry positive mass.
SyntheticCbn read_cbn(std::istream& in, const std::string& source = "<stream>");
SyntheticCbn load_cbn(const std::string& path);

// Directory holding the shipped fixtures: $SCRIPTCAUSAL_FIXTURES if set, the
// source tree when present, else the installed copy.
std::string fixture_dir();
// Loads a shipped fixture by name: F-POPCORN, F-DET, F-UNIFORM or F-ZIPF.
SyntheticCbn build_fixture(const std::string& name);

// Chains named "<name>-<index>", each with its own derived seed. With
// annotate_scenario every event carries the scenario's oot_event rated 4.
ChainCorpus sample_chains(const SyntheticCbn& cbn, std::size_t n, std::uint64_t seed,
                          bool annotate_scenario, std::size_t threads = 1);

// sum_z prior(z) g_z(. | k); k indexes cbn.events.
std::vector<double> exact_do_distribution(const SyntheticCbn& cbn, std::size_t k);
// Joint p(z, e_t = e) for t = 1..L as L tensors of scenarios x events.
std::vector<Tensor> position_joints(const SyntheticCbn& cbn);
// p(e_{t+1} | e_t = k) for position t in [1, L].
std::vector<double> exact_conditional(const SyntheticCbn& cbn, std::size_t k, std::size_t position);
// Observational transition distribution pooled over every adjacent pair in
// a chain (positions 1..L-1), i.e. what corpus bigram statistics estimate.
std::vector<double> pooled_conditional(const SyntheticCbn& cbn, std::size_t k);
// Event distribution averaged over the L positions.
std::vector<double> position_averaged_marginal(const SyntheticCbn& cbn);

}  // namespace scriptcausal
