#include "scriptcausal/synth.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/parallel.hpp"
#include "scriptcausal/rng.hpp"

#ifndef SCRIPTCAUSAL_FIXTURE_DIR
#define SCRIPTCAUSAL_FIXTURE_DIR ""
#endif
#ifndef SCRIPTCAUSAL_INSTALLED_FIXTURE_DIR
#define SCRIPTCAUSAL_INSTALLED_FIXTURE_DIR ""
#endif

namespace scriptcausal {

namespace {

using json = nlohmann::json;

constexpr std::string_view kCbnFormat = "scriptcausal-cbn v1";

void add_weights(const json& weights, const SyntheticCbn& cbn, std::vector<double>& row,
                 const std::string& where) {
  if (!weights.is_object()) throw_format(where + ": kernel row must be an object");
  for (const auto& [key, w] : weights.items()) {
    if (!w.is_number()) throw_format(where + ": weight for '" + key + "' is not a number");
    const double v = w.get<double>();
    if (!(v >= 0.0) || !std::isfinite(v)) throw_format(where + ": weight for '" + key + "' must be >= 0");
    std::size_t idx = 0;
    try {
      idx = cbn.index(key);
    } catch (const InvalidArgument&) {
      throw_format(where + ": unknown event '" + key + "'");
    }
    row[idx] += v;
  }
}

}  // namespace

std::size_t SyntheticCbn::index(const std::string& key) const {
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i] == key) return i;
  throw_invalid("event '" + key + "' is not part of CBN " + name);
}

std::size_t SyntheticCbn::role(const std::string& r) const {
  auto it = roles.find(r);
  if (it == roles.end()) throw_invalid("CBN " + name + " has no role '" + r + "'");
  return index(it->second);
}

SyntheticCbn read_cbn(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw_format(source + ": invalid JSON: " + e.what());
  }
  SyntheticCbn cbn;
  try {
    if (doc.at("format").get<std::string>() != kCbnFormat)
      throw_format(source + ": unsupported CBN format");
    cbn.name = doc.at("name").get<std::string>();
    cbn.length = doc.at("length").get<std::size_t>();
    cbn.smoothing = doc.at("smoothing").get<double>();
    cbn.events = doc.at("events").get<std::vector<std::string>>();
    if (doc.contains("roles")) cbn.roles = doc.at("roles").get<std::map<std::string, std::string>>();
    if (cbn.length < 2) throw_format(source + ": length must be at least 2");
    if (!(cbn.smoothing > 0.0 && cbn.smoothing <= 1.0))
      throw_format(source + ": smoothing must be in (0, 1]");
    if (cbn.events.empty()) throw_format(source + ": no events");
    for (std::size_t i = 0; i < cbn.events.size(); ++i) {
      try {
        EventType::from_key(cbn.events[i]);
      } catch (const InvalidArgument& e) {
        throw_format(source + ": " + e.what());
      }
      for (std::size_t j = 0; j < i; ++j)
        if (cbn.events[j] == cbn.events[i]) throw_format(source + ": duplicate event " + cbn.events[i]);
    }
    for (const auto& [r, key] : cbn.roles) {
      try {
        cbn.index(key);
      } catch (const InvalidArgument&) {
        throw_format(source + ": role '" + r + "' names unknown event '" + key + "'");
      }
    }

    const std::size_t n = cbn.events.size();
    const double uniform = cbn.smoothing / static_cast<double>(n);
    double prior_total = 0.0;
    for (const auto& sj : doc.at("scenarios")) {
      Scenario s;
      s.name = sj.at("name").get<std::string>();
      s.prior = sj.at("prior").get<double>();
      s.oot_event = sj.at("oot_event").get<std::string>();
      EventType::from_key(s.oot_event);
      if (!(s.prior > 0.0)) throw_format(source + ": scenario " + s.name + " needs a positive prior");
      prior_total += s.prior;
      const auto& kj = sj.at("kernel");
      s.kernel = Tensor::matrix(n + 1, n);
      for (const auto& [key, row] : kj.items()) {
        if (key != "*" && key != kStartKey) {
          try {
            cbn.index(key);
          } catch (const InvalidArgument&) {
            throw_format(source + ": kernel row for unknown event '" + key + "'");
          }
        }
        (void)row;
      }
      for (std::size_t r = 0; r <= n; ++r) {
        const bool start = r == n;
        const std::string key = start ? std::string(kStartKey) : cbn.events[r];
        const std::string where = source + ": scenario " + s.name + " row " + key;
        std::vector<double> w(n, 0.0);
        if (!start && kj.contains("*")) add_weights(kj.at("*"), cbn, w, where);
        if (kj.contains(key)) add_weights(kj.at(key), cbn, w, where);
        double total = 0.0;
        for (double x : w) total += x;
        if (!(total > 0.0)) throw_format(where + ": no mass");
        for (std::size_t c = 0; c < n; ++c)
          s.kernel(r, c) = (1.0 - cbn.smoothing) * (w[c] / total) + uniform;
      }
      cbn.scenarios.push_back(std::move(s));
    }
    if (cbn.scenarios.empty()) throw_format(source + ": no scenarios");
    if (std::abs(prior_total - 1.0) > 1e-9) throw_format(source + ": scenario priors must sum to 1");
  } catch (const json::exception& e) {
    throw_format(source + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw_format(source + ": " + e.what());
  }
  return cbn;
}

SyntheticCbn load_cbn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_invalid("cannot open CBN file '" + path + "'");
  return read_cbn(in, path);
}

std::string fixture_dir() {
  if (const char* env = std::getenv("SCRIPTCAUSAL_FIXTURES"); env && *env) return env;
  namespace fs = std::filesystem;
  const std::string src = SCRIPTCAUSAL_FIXTURE_DIR;
  if (!src.empty() && fs::exists(fs::path(src) / "f_popcorn.json")) return src;
  return SCRIPTCAUSAL_INSTALLED_FIXTURE_DIR;
}

SyntheticCbn build_fixture(const std::string& name) {
  std::string file;
  if (name == "F-POPCORN") file = "f_popcorn.json";
  else if (name == "F-DET") file = "f_det.json";
  else if (name == "F-UNIFORM") file = "f_uniform.json";
  else if (name == "F-ZIPF") file = "f_zipf.json";
  else throw_invalid("unknown fixture '" + name + "' (expected F-POPCORN, F-DET, F-UNIFORM or F-ZIPF)");
  return load_cbn((std::filesystem::path(fixture_dir()) / file).string());
}

ChainCorpus sample_chains(const SyntheticCbn& cbn, std::size_t n, std::uint64_t seed,
                          bool annotate, std::size_t threads) {
  if (n == 0) throw_invalid("sample_chains: n must be at least 1");
  std::vector<double> priors;
  for (const auto& s : cbn.scenarios) priors.push_back(s.prior);
  std::vector<EventType> types;
  for (const auto& key : cbn.events) types.push_back(EventType::from_key(key));
  std::string stem;
  for (char c : cbn.name) stem += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const std::size_t digits = std::to_string(n - 1).size();

  ChainCorpus corpus;
  corpus.provenance = "synth:" + cbn.name + ":seed=" + std::to_string(seed);
  corpus.chains.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    const auto& sc = cbn.scenarios[rng.categorical(priors)];
    auto& chain = corpus.chains[i];
    std::string idx = std::to_string(i);
    chain.chain_id = stem + "-" + std::string(digits - idx.size(), '0') + idx;
    std::size_t prev = cbn.start_row();
    for (std::size_t t = 0; t < cbn.length; ++t) {
      const std::size_t e = rng.categorical(sc.kernel.row(prev));
      ChainEvent ev;
      ev.event = types[e];
      if (annotate) ev.oot = std::vector<OotCandidate>{{sc.oot_event, 4}};
      chain.events.push_back(std::move(ev));
      prev = e;
    }
  });
  return corpus;
}

std::vector<double> exact_do_distribution(const SyntheticCbn& cbn, std::size_t k) {
  if (k >= cbn.num_events()) throw_invalid("exact_do_distribution: unknown event index");
  std::vector<double> out(cbn.num_events(), 0.0);
  for (const auto& s : cbn.scenarios) axpy(s.prior, s.kernel.row(k), out);
  return out;
}

std::vector<Tensor> position_joints(const SyntheticCbn& cbn) {
  const std::size_t n = cbn.num_events(), zs = cbn.scenarios.size();
  std::vector<Tensor> joints;
  Tensor cur = Tensor::matrix(zs, n);
  for (std::size_t z = 0; z < zs; ++z)
    for (std::size_t e = 0; e < n; ++e)
      cur(z, e) = cbn.scenarios[z].prior * cbn.scenarios[z].kernel(cbn.start_row(), e);
  joints.push_back(cur);
  for (std::size_t t = 1; t < cbn.length; ++t) {
    Tensor next = Tensor::matrix(zs, n);
    for (std::size_t z = 0; z < zs; ++z)
      for (std::size_t e = 0; e < n; ++e) axpy(cur(z, e), cbn.scenarios[z].kernel.row(e), next.row(z));
    joints.push_back(next);
    cur = std::move(next);
  }
  return joints;
}

namespace {

std::vector<double> conditional_from(const SyntheticCbn& cbn, const std::vector<Tensor>& joints,
                                     std::size_t k, std::size_t lo, std::size_t hi) {
  std::vector<double> out(cbn.num_events(), 0.0);
  double mass = 0.0;
  for (std::size_t t = lo; t < hi; ++t) {
    for (std::size_t z = 0; z < cbn.scenarios.size(); ++z) {
      const double w = joints[t](z, k);
      mass += w;
      axpy(w, cbn.scenarios[z].kernel.row(k), out);
    }
  }
  if (!(mass > 0.0)) throw_numerical("conditioning event has zero probability");
  for (auto& x : out) x /= mass;
  return out;
}

}  // namespace

std::vector<double> exact_conditional(const SyntheticCbn& cbn, std::size_t k, std::size_t position) {
  if (k >= cbn.num_events()) throw_invalid("exact_conditional: unknown event index");
  if (position < 1 || position > cbn.length)
    throw_invalid("exact_conditional: position must be in [1, " + std::to_string(cbn.length) + "]");
  const auto joints = position_joints(cbn);
  return conditional_from(cbn, joints, k, position - 1, position);
}

std::vector<double> pooled_conditional(const SyntheticCbn& cbn, std::size_t k) {
  if (k >= cbn.num_events()) throw_invalid("pooled_conditional: unknown event index");
  const auto joints = position_joints(cbn);
  return conditional_from(cbn, joints, k, 0, cbn.length - 1);
}

std::vector<double> position_averaged_marginal(const SyntheticCbn& cbn) {
  const auto joints = position_joints(cbn);
  std::vector<double> out(cbn.num_events(), 0.0);
  const double inv = 1.0 / static_cast<double>(cbn.length);
  for (const auto& j : joints)
    for (std::size_t z = 0; z < j.rows(); ++z) axpy(inv, j.row(z), out);
  return out;
}

}  // namespace scriptcausal
