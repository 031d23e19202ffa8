#include "scriptcausal/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/parallel.hpp"
#include "scriptcausal/rng.hpp"

namespace scriptcausal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  std::ostringstream s;
  s.precision(6);
  s << std::fixed << v;
  return s.str();
}

}  // namespace

std::vector<ClozeInstance> make_cloze_set(const ChainCorpus& corpus, const Vocabulary& vocab,
                                          std::size_t count, std::uint64_t seed) {
  struct Slot {
    std::size_t chain;
    std::size_t split;
  };
  std::vector<std::vector<EventId>> ids;
  ids.reserve(corpus.chains.size());
  std::vector<Slot> slots;
  for (std::size_t c = 0; c < corpus.chains.size(); ++c) {
    ids.push_back(chain_ids(corpus.chains[c], vocab));
    const auto& chain = ids.back();
    for (std::size_t i = 1; i < chain.size(); ++i)
      if (vocab.is_chain_event(chain[i])) slots.push_back({c, i});
  }
  if (count == 0) throw_invalid("cloze set size must be positive");
  if (count > slots.size())
    throw_invalid("cloze set of " + std::to_string(count) + " requested but only " +
                  std::to_string(slots.size()) + " split points are available");

  // Partial Fisher-Yates, then back to corpus order.
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(slots.size() - i));
    std::swap(slots[i], slots[j]);
  }
  slots.resize(count);
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    return a.chain != b.chain ? a.chain < b.chain : a.split < b.split;
  });

  std::vector<ClozeInstance> out;
  out.reserve(count);
  for (const auto& s : slots) {
    const auto& chain = ids[s.chain];
    ClozeInstance inst;
    inst.context.assign(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(s.split));
    inst.answer = chain[s.split];
    inst.chain_id = corpus.chains[s.chain].chain_id;
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<ClozeInstance> filter_by_cutoff(std::span<const ClozeInstance> instances,
                                            const FrequencyRank& rank, std::size_t cutoff) {
  const EventId max_id =
      rank.empty() ? 0 : *std::max_element(rank.begin(), rank.end());
  std::size_t size = max_id + 1;
  for (const auto& inst : instances) size = std::max<std::size_t>(size, inst.answer + 1);
  const auto top = top_frequency_mask(rank, size, cutoff);
  std::vector<ClozeInstance> out;
  for (const auto& inst : instances)
    if (!top[inst.answer]) out.push_back(inst);
  return out;
}

LmClozeSystem::LmClozeSystem(std::string name, const EventLm& lm, std::vector<bool> event_mask)
    : name_(std::move(name)), lm_(&lm), mask_(std::move(event_mask)) {
  if (mask_.size() != lm.vocab_size())
    throw_invalid("event mask size does not match the language model vocabulary");
}

std::vector<EventId> LmClozeSystem::top_n(std::span<const EventId> context, std::size_t n) const {
  std::vector<EventId> history;
  history.reserve(context.size() + 1);
  history.push_back(kStartId);
  history.insert(history.end(), context.begin(), context.end());
  const auto dist = lm_->next_distribution(history);
  std::vector<EventId> cands;
  for (EventId id = 0; id < mask_.size(); ++id)
    if (mask_[id]) cands.push_back(id);
  const auto keep = std::min(n, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                    [&](EventId a, EventId b) {
                      return dist[a] != dist[b] ? dist[a] > dist[b] : a < b;
                    });
  cands.resize(keep);
  return cands;
}

PairwiseClozeSystem::PairwiseClozeSystem(std::string name, PairScore score, FrequencyRank rank)
    : name_(std::move(name)), score_(std::move(score)), rank_(std::move(rank)) {}

std::vector<EventId> PairwiseClozeSystem::top_n(std::span<const EventId> context,
                                                std::size_t n) const {
  return rank_completions(score_, context, n, 0, rank_);
}

double recall_at_n(const ClozeSystem& system, std::span<const ClozeInstance> instances,
                   std::size_t n, std::size_t threads) {
  if (instances.empty()) throw_invalid("recall is undefined on an empty cloze set");
  std::vector<char> hit(instances.size(), 0);
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    const auto top = system.top_n(instances[i].context, n);
    hit[i] = std::find(top.begin(), top.end(), instances[i].answer) != top.end();
  });
  const auto hits = std::count(hit.begin(), hit.end(), 1);
  return 100.0 * static_cast<double>(hits) / static_cast<double>(instances.size());
}

std::size_t ClozeReport::last_applicable() const {
  std::size_t last = 0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] > 0) last = c;
  return last;
}

ClozeReport run_infrequent_cloze(std::span<const ClozeSystem* const> systems,
                                 std::span<const ClozeInstance> instances,
                                 const FrequencyRank& rank, const std::vector<std::size_t>& cutoffs,
                                 std::size_t n, std::size_t threads) {
  ClozeReport report;
  report.cutoffs = cutoffs;
  report.n = n;
  report.recall.assign(systems.size(), std::vector<double>(cutoffs.size(), kNaN));
  for (const auto* s : systems) report.systems.push_back(s->name());
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    const auto subset = filter_by_cutoff(instances, rank, cutoffs[c]);
    report.counts.push_back(subset.size());
    if (subset.empty()) continue;
    for (std::size_t s = 0; s < systems.size(); ++s)
      report.recall[s][c] = recall_at_n(*systems[s], subset, n, threads);
  }
  return report;
}

void write_cloze_report(std::ostream& out, const ClozeReport& report) {
  out << "system";
  for (auto c : report.cutoffs) out << "\t<" << c;
  out << "\ninstances";
  for (auto n : report.counts) out << '\t' << n;
  out << '\n';
  for (std::size_t s = 0; s < report.systems.size(); ++s) {
    out << report.systems[s];
    for (double r : report.recall[s]) out << '\t' << format_number(r);
    out << '\n';
  }
}

std::vector<EventId> sample_targets(const FrequencyRank& rank, std::size_t count,
                                    std::size_t exclude_top, std::uint64_t seed) {
  auto pool = candidate_events(rank, exclude_top);
  if (count > pool.size())
    throw_invalid("requested " + std::to_string(count) + " targets but only " +
                  std::to_string(pool.size()) + " events remain after the frequency filter");
  std::sort(pool.begin(), pool.end());
  Rng rng(seed);
  rng.shuffle(pool);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<SheetRow> pairwise_sheet(std::span<const NamedPairScore> systems,
                                     std::span<const EventId> targets, std::size_t per_system,
                                     std::size_t exclude_top, const FrequencyRank& rank,
                                     std::uint64_t seed) {
  std::vector<SheetRow> rows;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    std::vector<SheetRow> task;
    for (const auto& sys : systems) {
      const auto preds = top_predecessors(sys.score, targets[t], per_system, exclude_top, rank);
      for (auto k : preds) task.push_back({t, targets[t], k, sys.name, false});
      for (std::size_t m = preds.size(); m < per_system; ++m)
        task.push_back({t, targets[t], kUnkId, sys.name, true});
    }
    Rng rng(derive_seed(seed, t));
    rng.shuffle(task);
    rows.insert(rows.end(), task.begin(), task.end());
  }
  return rows;
}

void write_sheet(std::ostream& out, std::span<const SheetRow> rows, const Vocabulary& vocab) {
  out << "task_id\ttarget_event\tcandidate_event\thidden_system_key\tscore\tstatus\n";
  for (const auto& r : rows) {
    out << r.task_id << '\t' << vocab.key(r.target) << '\t'
        << (r.short_row ? std::string("-") : vocab.key(r.candidate)) << '\t' << r.system << "\t\t"
        << (r.short_row ? "short" : "ok") << '\n';
  }
}

ScoreSummary summarize_scores(std::istream& in, const std::string& source) {
  struct Scored {
    std::string system;
    double score;
  };
  std::map<std::size_t, std::vector<Scored>> tasks;
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("task_id\t", 0) == 0) continue;
    }
    const auto f = split_tabs(line);
    const auto where = source + ":" + std::to_string(lineno);
    if (f.size() < 5) throw_format(where + ": expected at least 5 tab-separated columns");
    if (f.size() > 5 && f[5] == "short") continue;
    if (f[4].empty()) continue;
    std::size_t task = 0;
    double score = 0.0;
    try {
      std::size_t pos = 0;
      task = std::stoul(f[0], &pos);
      if (pos != f[0].size()) throw std::invalid_argument("task");
      score = std::stod(f[4], &pos);
      if (pos != f[4].size()) throw std::invalid_argument("score");
    } catch (const std::exception&) {
      throw_format(where + ": malformed task id or score");
    }
    if (!std::isfinite(score)) throw_format(where + ": score is not finite");
    tasks[task].push_back({f[3], score});
  }

  std::map<std::string, std::size_t> index;
  for (const auto& [_, rows] : tasks)
    for (const auto& r : rows) index.emplace(r.system, 0);
  ScoreSummary out;
  for (auto& [name, i] : index) {
    i = out.systems.size();
    out.systems.push_back({name, 0, 0.0, 0.0});
  }
  for (const auto& [task, rows] : tasks) {
    std::vector<double> sum(index.size(), 0.0);
    std::vector<std::size_t> n(index.size(), 0);
    for (const auto& r : rows) {
      // Average rank among the task's scored pairs, ties share their mean.
      std::size_t higher = 0, equal = 0;
      for (const auto& o : rows) {
        if (o.score > r.score) ++higher;
        else if (o.score == r.score) ++equal;
      }
      const double rank = static_cast<double>(higher) + (static_cast<double>(equal) + 1.0) / 2.0;
      auto& s = out.systems[index.at(r.system)];
      ++s.pairs;
      s.mean_score += r.score;
      s.mean_rank += rank;
      sum[index.at(r.system)] += r.score;
      ++n[index.at(r.system)];
    }
    out.task_ids.push_back(task);
    std::vector<double> paired(index.size(), kNaN);
    for (std::size_t i = 0; i < paired.size(); ++i)
      if (n[i] > 0) paired[i] = sum[i] / static_cast<double>(n[i]);
    out.paired.push_back(std::move(paired));
  }
  for (auto& s : out.systems) {
    s.mean_score /= static_cast<double>(s.pairs);
    s.mean_rank /= static_cast<double>(s.pairs);
  }
  return out;
}

void write_score_summary(std::ostream& out, const ScoreSummary& summary) {
  out << "system\tpairs\tmean_score\tmean_rank\n";
  for (const auto& s : summary.systems)
    out << s.system << '\t' << s.pairs << '\t' << format_number(s.mean_score) << '\t'
        << format_number(s.mean_rank) << '\n';
}

void write_paired_scores(std::ostream& out, const ScoreSummary& summary) {
  out << "task_id";
  for (const auto& s : summary.systems) out << '\t' << s.system;
  out << '\n';
  for (std::size_t t = 0; t < summary.task_ids.size(); ++t) {
    out << summary.task_ids[t];
    for (double v : summary.paired[t]) out << '\t' << format_number(v);
    out << '\n';
  }
}

DiversityStats diversity_report(const std::string& system,
                                std::span<const std::string> emissions) {
  if (emissions.empty()) throw_invalid("no emissions for system " + system);
  DiversityStats stats;
  stats.system = system;
  stats.total = emissions.size();
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<std::string> order;
  std::size_t fresh = 0;
  for (const auto& e : emissions) {
    auto [it, inserted] = seen.emplace(e, 0);
    if (inserted) {
      ++fresh;
      order.push_back(e);
    }
    ++it->second;
  }
  stats.distinct = seen.size();
  stats.pct_new = 100.0 * static_cast<double>(fresh) / static_cast<double>(stats.total);
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return seen[a] > seen[b];
  });
  for (std::size_t i = 0; i < std::min<std::size_t>(2, order.size()); ++i)
    stats.top.emplace_back(order[i], 100.0 * static_cast<double>(seen[order[i]]) /
                                         static_cast<double>(stats.total));
  return stats;
}

void write_diversity(std::ostream& out, std::span<const DiversityStats> stats) {
  out << "system\ttotal\tdistinct\tpct_new\ttop1\ttop1_pct\ttop2\ttop2_pct\n";
  for (const auto& s : stats) {
    out << s.system << '\t' << s.total << '\t' << s.distinct << '\t' << format_number(s.pct_new);
    for (std::size_t i = 0; i < 2; ++i) {
      if (i < s.top.size())
        out << '\t' << s.top[i].first << '\t' << format_number(s.top[i].second);
      else
        out << "\t-\tNA";
    }
    out << '\n';
  }
}

}  // namespace scriptcausal
