#include "scriptcausal/interventions.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/model_io.hpp"
#include "scriptcausal/parallel.hpp"
#include "scriptcausal/rng.hpp"

namespace scriptcausal {

namespace {

constexpr std::string_view kTableMagic = "#scriptcausal-itable v1";

}  // namespace

AdjustmentSet sample_adjustment_set(std::span<const ConditionalInstance> instances, std::size_t n,
                                    std::uint64_t seed) {
  if (n == 0) throw_invalid("adjustment set size must be at least 1");
  if (n > instances.size())
    throw_invalid("adjustment set of " + std::to_string(n) + " requested from " +
                  std::to_string(instances.size()) + " instances");
  std::vector<std::size_t> idx(instances.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (n < instances.size()) {
    Rng rng(seed);
    rng.shuffle(idx);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
  }
  AdjustmentSet set;
  set.seed = seed;
  for (auto i : idx) set.contexts.push_back(instances[i].context);
  return set;
}

InterventionTable estimate_interventions(const ConditionalModel& model, const AdjustmentSet& set,
                                         const std::string& model_id, std::size_t threads) {
  if (set.contexts.empty()) throw_invalid("estimate_interventions: empty adjustment set");
  const std::size_t v = model.vocab_size();
  std::vector<ContextPrefix> prefixes(set.contexts.size());
  parallel_for(prefixes.size(), threads,
               [&](std::size_t j) { prefixes[j] = model.prefix(set.contexts[j]); });

  InterventionTable table;
  table.effect = Tensor::matrix(v, v);
  table.model_id = model_id;
  table.seed = set.seed;
  table.samples = set.contexts.size();
  const double inv = 1.0 / static_cast<double>(prefixes.size());
  parallel_for(v, threads, [&](std::size_t k) {
    auto row = table.effect.row(k);
    for (const auto& pre : prefixes) {
      const auto dist = model.distribution_with_prev(pre, static_cast<EventId>(k));
      for (std::size_t l = 0; l < v; ++l) row[l] += dist[l];
    }
    for (auto& x : row) x *= inv;
  });
  if (!table.effect.all_finite()) throw_numerical("non-finite intervention estimate");
  return table;
}

void write_itable(std::ostream& out, const InterventionTable& t) {
  if (t.model_id.empty() || t.model_id.find_first_of(" \t\n") != std::string::npos)
    throw_invalid("intervention table model id must be a non-empty word");
  out << kTableMagic << ' ' << t.size() << ' ' << t.samples << ' ' << t.seed << ' ' << t.model_id
      << '\n';
  for (double x : t.effect.values) write_f64(out, x);
  if (!out) throw_format("failed writing intervention table");
}

InterventionTable read_itable(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kTableMagic, 0) != 0)
    throw_format(source + ": not an intervention table (bad header)");
  std::istringstream hs(line.substr(kTableMagic.size()));
  std::size_t size = 0;
  InterventionTable t;
  if (!(hs >> size >> t.samples >> t.seed >> t.model_id) || size == 0 || size > (1u << 20))
    throw_format(source + ": malformed intervention table header");
  std::string extra;
  if (hs >> extra) throw_format(source + ": trailing fields in intervention table header");
  t.effect = Tensor::matrix(size, size);
  for (auto& x : t.effect.values) x = read_f64(in, source);
  if (in.peek() != std::char_traits<char>::eof()) throw_format(source + ": trailing bytes after table");
  return t;
}

void save_itable(const std::string& path, const InterventionTable& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_invalid("cannot open '" + path + "' for writing");
  write_itable(out, t);
}

InterventionTable load_itable(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_invalid("cannot open intervention table '" + path + "'");
  return read_itable(in, path);
}

void write_itable_tsv(std::ostream& out, const InterventionTable& t, const Vocabulary& vocab) {
  if (t.size() != vocab.size()) throw_invalid("intervention table does not match the vocabulary");
  out << "do_event\tnext_event\teffect\n";
  out.precision(17);
  for (EventId k = 0; k < t.size(); ++k) {
    if (!vocab.is_chain_event(k)) continue;
    for (EventId l = 0; l < t.size(); ++l)
      if (vocab.is_chain_event(l)) out << vocab.key(k) << '\t' << vocab.key(l) << '\t' << t.effect(k, l) << '\n';
  }
}

ScriptScores::ScriptScores(const InterventionTable& table, std::vector<bool> mask)
    : table_(&table), mask_(std::move(mask)), column_sums_(table.size(), 0.0) {
  if (mask_.size() != table.size()) throw_invalid("event mask does not match the table");
  for (std::size_t j = 0; j < table.size(); ++j) {
    if (!mask_[j]) continue;
    auto row = table.effect.row(j);
    for (std::size_t l = 0; l < table.size(); ++l) column_sums_[l] += row[l];
  }
}

double ScriptScores::operator()(EventId k, EventId l) const {
  if (k >= size() || l >= size()) throw_invalid("script score index out of range");
  if (!mask_[k] || column_sums_[l] <= 0.0) return 0.0;
  return table_->effect(k, l) / column_sums_[l];
}

std::vector<bool> chain_event_mask(const Vocabulary& vocab) {
  std::vector<bool> mask(vocab.size());
  for (EventId id = 0; id < vocab.size(); ++id) mask[id] = vocab.is_chain_event(id);
  return mask;
}

double script_score(const InterventionTable& table, const std::vector<bool>& mask, EventId k,
                    EventId l) {
  return ScriptScores(table, mask)(k, l);
}

std::vector<EventId> candidate_events(const FrequencyRank& rank, std::size_t exclude_top) {
  std::vector<EventId> out;
  for (std::size_t i = exclude_top; i < rank.size(); ++i) out.push_back(rank[i]);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<EventId> best_by(std::vector<EventId> cands, std::vector<double> scores, std::size_t n) {
  std::vector<std::size_t> idx(cands.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  // Candidates arrive sorted by id, so a stable sort keeps ties by id.
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<EventId> out;
  for (std::size_t i = 0; i < std::min(n, idx.size()); ++i) out.push_back(cands[idx[i]]);
  return out;
}

}  // namespace

std::vector<EventId> top_predecessors(const PairScore& score, EventId l, std::size_t topk,
                                      std::size_t exclude_top, const FrequencyRank& rank) {
  auto cands = candidate_events(rank, exclude_top);
  std::vector<double> s(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) s[i] = score(cands[i], l);
  return best_by(std::move(cands), std::move(s), topk);
}

std::vector<EventId> rank_completions(const PairScore& score, std::span<const EventId> context,
                                      std::size_t n, std::size_t exclude_top,
                                      const FrequencyRank& rank) {
  if (context.empty()) throw_invalid("completion context must not be empty");
  auto cands = candidate_events(rank, exclude_top);
  std::vector<double> s(cands.size(), 0.0);
  const double inv = 1.0 / static_cast<double>(context.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    double total = 0.0;
    for (auto c : context) total += score(c, cands[i]);
    s[i] = total * inv;
  }
  return best_by(std::move(cands), std::move(s), n);
}

EventId complete_chain(const PairScore& score, std::span<const EventId> context,
                       std::size_t exclude_top, const FrequencyRank& rank) {
  auto best = rank_completions(score, context, 1, exclude_top, rank);
  if (best.empty()) throw_invalid("no completion candidates remain after filtering");
  return best.front();
}

}  // namespace scriptcausal
