// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Pass criterion numbers as arguments to
// run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scriptcausal/conditional_model.hpp"
#include "scriptcausal/corpus_io.hpp"
#include "scriptcausal/eval.hpp"
#include "scriptcausal/event_core.hpp"
#include "scriptcausal/event_lm.hpp"
#include "scriptcausal/gradcheck.hpp"
#include "scriptcausal/interventions.hpp"
#include "scriptcausal/loss.hpp"
#include "scriptcausal/model_checks.hpp"
#include "scriptcausal/model_io.hpp"
#include "scriptcausal/pmi.hpp"
#include "scriptcausal/rng.hpp"
#include "scriptcausal/synth.hpp"

using namespace scriptcausal;

namespace {

// Tolerances.
constexpr double kRowL1 = 0.05;
constexpr double kGapRelTol = 0.30;
constexpr double kGradRelErr = 1e-4;
constexpr double kSumTol = 1e-9;
constexpr double kPmiTol = 1e-9;

// Workload sizes.
constexpr std::size_t kPopcornChains = 50000;
constexpr std::size_t kAdjustmentSamples = 2000;
constexpr std::size_t kNoConfounderChains = 50000;
constexpr std::size_t kPropertyCases = 10000;
constexpr std::size_t kBruteForceChains = 1000;
constexpr std::size_t kZipfChains = 20000;
constexpr std::size_t kClozeInstances = 10000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::vector<EventId>> corpus_ids(const ChainCorpus& corpus, const Vocabulary& vocab) {
  std::vector<std::vector<EventId>> out;
  out.reserve(corpus.chains.size());
  for (const auto& c : corpus.chains) out.push_back(chain_ids(c, vocab));
  return out;
}

// Row of an intervention table re-indexed to the CBN's event order. Mass
// on ids outside the CBN is returned separately.
std::vector<double> cbn_row(const InterventionTable& table, const Vocabulary& vocab,
                            const SyntheticCbn& cbn, std::size_t k, double* stray) {
  const EventId kid = vocab.lookup(cbn.events[k]);
  std::vector<double> row(cbn.num_events());
  double inside = 0.0;
  for (std::size_t l = 0; l < row.size(); ++l) {
    row[l] = table.effect(kid, vocab.lookup(cbn.events[l]));
    inside += row[l];
  }
  double total = 0.0;
  for (std::size_t j = 0; j < table.size(); ++j) total += table.effect(kid, j);
  *stray = total - inside;
  return row;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// --- F-POPCORN pipeline shared by criteria 1 and 2 ---------------------------

struct PopcornRun {
  SyntheticCbn cbn;
  ChainCorpus train;
  Vocabulary vocab;
  InterventionTable table;
  double seconds = 0.0;
};

const PopcornRun& popcorn_run() {
  static std::optional<PopcornRun> run;
  if (run) return *run;
  const auto t0 = std::chrono::steady_clock::now();
  PopcornRun r;
  r.cbn = build_fixture("F-POPCORN");
  const auto corpus = sample_chains(r.cbn, kPopcornChains, 101, true);
  auto parts = split_corpus(corpus, {0.9, 0.05, 0.05}, 102);
  r.train = std::move(parts.train);
  r.vocab = build_vocab_from(r.train, 1);
  const auto tokens = build_token_vocab(r.train, 1);
  const auto train = extract_training_instances(r.train, r.vocab, tokens, 3);
  const auto dev = extract_training_instances(parts.dev, r.vocab, tokens, 3);

  ConditionalConfig cfg;
  cfg.dim = 32;
  cfg.hidden = 64;
  cfg.max_epochs = 15;
  cfg.finetune_lr = 3e-4;
  cfg.finetune_max_epochs = 10;
  cfg.seed = 103;
  auto model = train_conditional(train, dev, r.vocab.size(), tokens.tokens(), cfg);
  model = finetune_with_oot(model, train, dev, cfg);
  const auto set = sample_adjustment_set(train, kAdjustmentSamples, 104);
  r.table = estimate_interventions(model, set, "popcorn");
  r.seconds = seconds_since(t0);
  run = std::move(r);
  return *run;
}

Outcome criterion1() {
  const auto& r = popcorn_run();
  double worst = 0.0;
  std::string worst_event;
  for (std::size_t k = 0; k < r.cbn.num_events(); ++k) {
    double stray = 0.0;
    const auto est = cbn_row(r.table, r.vocab, r.cbn, k, &stray);
    const double d = l1(est, exact_do_distribution(r.cbn, k)) + stray;
    if (d > worst) {
      worst = d;
      worst_event = r.cbn.events[k];
    }
  }

  const auto popcorn = r.cbn.role("confounded_sibling");
  const auto cry = r.cbn.role("effect");
  const EventId pid = r.vocab.lookup(r.cbn.events[popcorn]);
  const EventId cid = r.vocab.lookup(r.cbn.events[cry]);
  std::uint64_t after = 0, hits = 0;
  for (const auto& chain : corpus_ids(r.train, r.vocab))
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      if (chain[i] == pid) {
        ++after;
        hits += chain[i + 1] == cid;
      }
  const double observed = static_cast<double>(hits) / static_cast<double>(after);
  const double est_gap = observed - r.table.effect(pid, cid);
  const double exact_gap =
      pooled_conditional(r.cbn, popcorn)[cry] - exact_do_distribution(r.cbn, popcorn)[cry];
  const bool gap_ok = exact_gap > 0 && est_gap > 0 &&
                      std::abs(est_gap - exact_gap) <= kGapRelTol * std::abs(exact_gap);

  Outcome o;
  o.pass = worst <= kRowL1 && gap_ok;
  o.detail = "max row L1 " + fmt("%.4f", worst) + " (" + worst_event + "), gap est " +
             fmt("%.4f", est_gap) + " vs exact " + fmt("%.4f", exact_gap) + ", pipeline " +
             fmt("%.0f", r.seconds) + "s";
  return o;
}

std::size_t position_of(const std::vector<EventId>& list, EventId id) {
  return static_cast<std::size_t>(std::find(list.begin(), list.end(), id) - list.begin());
}

Outcome criterion2() {
  const auto& r = popcorn_run();
  const auto rank = frequency_rank(r.vocab);
  const EventId sad = r.vocab.lookup(r.cbn.events[r.cbn.role("direct_cause")]);
  const EventId pop = r.vocab.lookup(r.cbn.events[r.cbn.role("confounded_sibling")]);
  const EventId cry = r.vocab.lookup(r.cbn.events[r.cbn.role("effect")]);

  const ScriptScores causal(r.table, chain_event_mask(r.vocab));
  const auto by_causal = top_predecessors(std::cref(causal), cry, rank.size(), 0, rank);

  const auto ids = corpus_ids(r.train, r.vocab);
  const auto counts = count_skip_bigrams(ids, r.vocab.size());
  const PairScore pmi = [&](EventId k, EventId l) { return ordered_pmi(counts, k, l, true); };
  const auto by_pmi = top_predecessors(pmi, cry, rank.size(), 0, rank);

  const auto cs = position_of(by_causal, sad), cp = position_of(by_causal, pop);
  const auto ps = position_of(by_pmi, sad), pp = position_of(by_pmi, pop);
  Outcome o;
  o.pass = cs < cp && pp < ps;
  o.detail = "causal ranks sad/popcorn " + std::to_string(cs + 1) + "/" + std::to_string(cp + 1) +
             ", pmi ranks " + std::to_string(ps + 1) + "/" + std::to_string(pp + 1);
  return o;
}

// --- 3 ----------------------------------------------------------------------

Outcome criterion3() {
  double worst = 0.0;
  std::string where;
  for (const std::string name : {"F-DET", "F-UNIFORM"}) {
    const auto cbn = build_fixture(name);
    const auto corpus = sample_chains(cbn, kNoConfounderChains, 301, false);
    const auto parts = split_corpus(corpus, {0.9, 0.05, 0.05}, 302);
    const auto vocab = build_vocab_from(parts.train, 1);
    const auto tokens = build_token_vocab(parts.train, 1);
    const auto train = extract_training_instances(parts.train, vocab, tokens, 3);
    const auto dev = extract_training_instances(parts.dev, vocab, tokens, 3);
    ConditionalConfig cfg;
    cfg.dim = 32;
    cfg.hidden = 64;
    cfg.max_epochs = 15;
    cfg.seed = 303;
    const auto model = train_conditional(train, dev, vocab.size(), tokens.tokens(), cfg);
    const auto table =
        estimate_interventions(model, sample_adjustment_set(train, kAdjustmentSamples, 304), name);
    for (std::size_t k = 0; k < cbn.num_events(); ++k) {
      double stray = 0.0;
      const auto est = cbn_row(table, vocab, cbn, k, &stray);
      const double d = l1(est, exact_conditional(cbn, k, 1)) + stray;
      if (d > worst) {
        worst = d;
        where = name + " " + cbn.events[k];
      }
    }
  }
  return {worst <= kRowL1, "max row L1 " + fmt("%.4f", worst) + " (" + where + ")"};
}

// --- 4 ----------------------------------------------------------------------

Outcome criterion4() {
  GradCheckSetup setup;
  setup.seed = 401;
  double worst = 0.0;
  std::string where;
  auto record = [&](const std::string& what, const GradCheckResult& r) {
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      where = what + ":" + r.worst_param + "[" + std::to_string(r.worst_index) + "] " +
              fmt("%.3e", r.worst_analytic) + " vs " + fmt("%.3e", r.worst_numeric);
    }
  };
  record("lm", check_event_lm_gradients(setup));
  for (const TextMode mode : {TextMode::mean, TextMode::cnn})
    for (const bool oot : {false, true})
      record(std::string("cond-") + std::string(to_string(mode)) + (oot ? "+oot" : ""),
             check_conditional_gradients(setup, mode, oot));
  return {worst < kGradRelErr, "max relative error " + fmt("%.2e", worst) + " (" + where + ")"};
}

// --- 5 ----------------------------------------------------------------------

SyntheticCbn random_cbn(Rng& rng) {
  SyntheticCbn cbn;
  cbn.name = "random";
  cbn.length = 2 + rng.below(6);
  cbn.smoothing = rng.uniform();
  const std::size_t events = 2 + rng.below(6);
  for (std::size_t e = 0; e < events; ++e) cbn.events.push_back("e" + std::to_string(e) + ":nsubj");
  const std::size_t nz = 1 + rng.below(3);
  double prior_total = 0.0;
  for (std::size_t z = 0; z < nz; ++z) {
    Scenario s;
    s.name = "z" + std::to_string(z);
    s.prior = 0.05 + rng.uniform();
    prior_total += s.prior;
    s.oot_event = s.name + ":scenario";
    s.kernel = Tensor::matrix(events + 1, events);
    for (std::size_t r = 0; r <= events; ++r) {
      double t = 0.0;
      for (std::size_t c = 0; c < events; ++c) t += s.kernel(r, c) = rng.uniform() + 1e-3;
      for (std::size_t c = 0; c < events; ++c) {
        s.kernel(r, c) = (1.0 - cbn.smoothing) * s.kernel(r, c) / t +
                         cbn.smoothing / static_cast<double>(events);
      }
    }
    cbn.scenarios.push_back(std::move(s));
  }
  for (auto& s : cbn.scenarios) s.prior /= prior_total;
  return cbn;
}

double sum_error(std::span<const double> v) {
  return std::abs(std::accumulate(v.begin(), v.end(), 0.0) - 1.0);
}

Outcome criterion5() {
  Rng rng(501);
  double worst = 0.0;
  std::string where;
  std::size_t checks = 0;
  auto note = [&](double err, const char* what) {
    ++checks;
    if (err > worst) {
      worst = err;
      where = what;
    }
  };
  for (std::size_t c = 0; c < kPropertyCases; ++c) {
    switch (c % 4) {
      case 0: {
        std::vector<double> logits(1 + rng.below(60));
        const double scale = rng.uniform(0.0, 80.0);
        for (auto& x : logits) x = rng.uniform(-scale, scale);
        note(sum_error(softmax(logits)), "softmax");
        break;
      }
      case 1:
      case 3: {
        const std::size_t vocab = kNumSpecialIds + 1 + rng.below(8);
        ConditionalModel model(vocab, {"a", "b", "c"}, 4, 3, TextMode::mean, rng.next());
        if (rng.bernoulli(0.5)) {
          model.begin_finetune();
          init_uniform(model.params().w_o, 1.0, rng);
        }
        const auto inst = random_instances(1 + rng.below(5), vocab, 3, rng);
        const auto set = sample_adjustment_set(inst, inst.size(), rng.next());
        const auto table = estimate_interventions(model, set, "prop");
        if (c % 4 == 1) {
          for (std::size_t k = 0; k < vocab; ++k) note(sum_error(table.effect.row(k)), "itable row");
          break;
        }
        std::vector<bool> mask(vocab, false);
        for (std::size_t k = 0; k < vocab; ++k) mask[k] = rng.bernoulli(0.7);
        const ScriptScores s(table, mask);
        for (EventId l = 0; l < vocab; ++l) {
          double col = 0.0;
          for (EventId k = 0; k < vocab; ++k) col += s(k, l);
          if (col > 0.0) note(std::abs(col - 1.0), "S column");
        }
        break;
      }
      case 2: {
        const auto cbn = random_cbn(rng);
        const auto k = static_cast<std::size_t>(rng.below(cbn.num_events()));
        note(sum_error(exact_do_distribution(cbn, k)), "do row");
        note(sum_error(pooled_conditional(cbn, k)), "pooled row");
        for (std::size_t t = 1; t <= cbn.length; ++t)
          note(sum_error(exact_conditional(cbn, k, t)), "conditional row");
        note(sum_error(position_averaged_marginal(cbn)), "marginal");
        break;
      }
    }
  }
  return {worst <= kSumTol, std::to_string(checks) + " sums, max deviation " + fmt("%.2e", worst) +
                                (where.empty() ? "" : " (" + where + ")")};
}

// --- 6 ----------------------------------------------------------------------

Outcome criterion6() {
  OrderedCounts c;
  c.left_totals.assign(2, 0);
  c.right_totals.assign(2, 0);
  c.pairs[{0, 1}] = 3;
  c.left_totals[0] = 4;
  c.right_totals[1] = 3;
  c.grand_total = 10;
  const double raw = ordered_pmi(c, 0, 1, false);
  const double disc = ordered_pmi(c, 0, 1, true);
  const double raw_expected = std::log(2.5);
  const double disc_expected = std::log(2.5) * 0.75 * 0.75;
  bool ok = std::abs(raw - raw_expected) <= kPmiTol && std::abs(disc - disc_expected) <= kPmiTol &&
            std::abs(raw - 0.9163) < 5e-5 && std::abs(disc - 0.5154) < 5e-5;

  Rng rng(601);
  std::size_t mismatches = 0;
  for (const std::size_t window : {1, 2, 3, 5}) {
    for (const bool self : {true, false}) {
      constexpr std::size_t kVocab = 12;
      std::vector<std::vector<EventId>> chains(kBruteForceChains);
      for (auto& ch : chains)
        for (auto n = rng.below(16); n > 0; --n) ch.push_back(static_cast<EventId>(rng.below(kVocab)));
      std::map<std::pair<EventId, EventId>, std::uint64_t> brute;
      std::uint64_t total = 0;
      for (const auto& ch : chains)
        for (std::size_t i = 0; i < ch.size(); ++i)
          for (std::size_t j = i + 1; j < ch.size() && j - i <= window; ++j) {
            if (!self && ch[i] == ch[j]) continue;
            ++brute[{ch[i], ch[j]}];
            ++total;
          }
      for (const std::size_t threads : {1, 3}) {
        const auto got = count_skip_bigrams(chains, kVocab, window, self, threads);
        if (got.pairs != brute || got.grand_total != total) ++mismatches;
        for (EventId a = 0; a < kVocab; ++a) {
          std::uint64_t left = 0, right = 0;
          for (const auto& [k, n] : brute) {
            if (k.first == a) left += n;
            if (k.second == a) right += n;
          }
          if (got.left_totals[a] != left || got.right_totals[a] != right) ++mismatches;
        }
      }
    }
  }
  ok = ok && mismatches == 0;
  return {ok, "raw " + fmt("%.10f", raw) + ", discounted " + fmt("%.10f", disc) + ", " +
                  std::to_string(mismatches) + " count mismatches"};
}

// --- 7 ----------------------------------------------------------------------

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cbn = build_fixture("F-ZIPF");
  const auto corpus = sample_chains(cbn, kZipfChains, 701, false);
  const auto parts = split_corpus(corpus, {0.8, 0.05, 0.15}, 702);
  const auto vocab = build_vocab_from(parts.train, 1);
  const auto tokens = build_token_vocab(parts.train, 1);
  const auto rank = frequency_rank(vocab);

  EventLmConfig lm_cfg;
  lm_cfg.input_dim = 32;
  lm_cfg.hidden = 64;
  lm_cfg.max_epochs = 15;
  lm_cfg.seed = 703;
  const auto lm = train_event_lm(corpus_ids(parts.train, vocab), corpus_ids(parts.dev, vocab),
                                 vocab.size(), lm_cfg);

  const auto train = extract_training_instances(parts.train, vocab, tokens, 3);
  const auto dev = extract_training_instances(parts.dev, vocab, tokens, 3);
  ConditionalConfig cfg;
  cfg.dim = 32;
  cfg.hidden = 64;
  cfg.max_epochs = 15;
  cfg.seed = 704;
  const auto model = train_conditional(train, dev, vocab.size(), tokens.tokens(), cfg);
  const auto table =
      estimate_interventions(model, sample_adjustment_set(train, kAdjustmentSamples, 705), "zipf");
  const ScriptScores scores(table, chain_event_mask(vocab));

  const LmClozeSystem lm_sys("lm", lm, chain_event_mask(vocab));
  const PairwiseClozeSystem causal_sys("causal", std::cref(scores), rank);
  const ClozeSystem* systems[] = {&lm_sys, &causal_sys};
  const auto cloze = make_cloze_set(parts.test, vocab, kClozeInstances, 706);
  const auto report = run_infrequent_cloze(systems, cloze, rank);

  const auto last = report.last_applicable();
  const auto& lmr = report.recall[0];
  const auto& car = report.recall[1];
  bool decreasing = last > 0;
  for (std::size_t c = 1; c <= last; ++c) decreasing = decreasing && lmr[c] < lmr[c - 1];
  const bool ok = lmr[0] > car[0] && car[last] > lmr[last] && decreasing;

  std::string detail = "lm";
  for (std::size_t c = 0; c <= last; ++c) detail += " " + fmt("%.1f", lmr[c]);
  detail += " | causal";
  for (std::size_t c = 0; c <= last; ++c) detail += " " + fmt("%.1f", car[c]);
  detail += " | cutoffs to <" + std::to_string(report.cutoffs[last]) + ", " +
            fmt("%.0f", seconds_since(t0)) + "s";
  return {ok, detail};
}

// --- 8 and 9 ----------------------------------------------------------------

struct Artifacts {
  std::map<std::string, std::string> files;
};

template <class F>
std::string serialize(F&& write) {
  std::ostringstream s(std::ios::binary);
  write(s);
  return s.str();
}

Artifacts run_pipeline(std::size_t threads) {
  Artifacts a;
  const auto cbn = build_fixture("F-POPCORN");
  const auto corpus = sample_chains(cbn, 400, 801, true, threads);
  a.files["corpus"] = serialize([&](std::ostream& o) { write_chains(o, corpus); });
  const auto parts = split_corpus(corpus, {0.8, 0.1, 0.1}, 802);
  a.files["split"] = serialize([&](std::ostream& o) {
    write_chains(o, parts.train);
    write_chains(o, parts.dev);
    write_chains(o, parts.test);
  });
  const auto vocab = build_vocab_from(parts.train, 1);
  a.files["vocab"] = serialize([&](std::ostream& o) { vocab.write(o); });
  const auto ids = corpus_ids(parts.train, vocab);
  const auto counts = count_skip_bigrams(ids, vocab.size(), 2, true, threads);
  a.files["counts"] = serialize([&](std::ostream& o) { write_counts(o, counts, vocab); });

  EventLmConfig lm_cfg;
  lm_cfg.input_dim = 8;
  lm_cfg.hidden = 8;
  lm_cfg.batch_size = 16;
  lm_cfg.max_epochs = 2;
  lm_cfg.threads = threads;
  const auto lm = train_event_lm(ids, corpus_ids(parts.dev, vocab), vocab.size(), lm_cfg);
  a.files["lm"] = serialize([&](std::ostream& o) { write_model(o, lm.to_file()); });

  const auto tokens = build_token_vocab(parts.train, 1);
  const auto train = extract_training_instances(parts.train, vocab, tokens, 3);
  const auto dev = extract_training_instances(parts.dev, vocab, tokens, 3);
  ConditionalConfig cfg;
  cfg.dim = 8;
  cfg.hidden = 8;
  cfg.batch_size = 64;
  cfg.max_epochs = 2;
  cfg.finetune_max_epochs = 2;
  cfg.finetune_lr = 3e-4;
  cfg.threads = threads;
  const auto pre = train_conditional(train, dev, vocab.size(), tokens.tokens(), cfg);
  a.files["cond"] = serialize([&](std::ostream& o) { write_model(o, pre.to_file()); });
  const auto fine = finetune_with_oot(pre, train, dev, cfg);
  a.files["cond-ft"] = serialize([&](std::ostream& o) { write_model(o, fine.to_file()); });
  const auto table =
      estimate_interventions(fine, sample_adjustment_set(train, 100, 803), "ft", threads);
  a.files["itable"] = serialize([&](std::ostream& o) { write_itable(o, table); });

  const auto rank = frequency_rank(vocab);
  const ScriptScores scores(table, chain_event_mask(vocab));
  const LmClozeSystem lm_sys("lm", lm, chain_event_mask(vocab));
  const PairwiseClozeSystem causal_sys("causal", std::cref(scores), rank);
  const ClozeSystem* systems[] = {&lm_sys, &causal_sys};
  const auto cloze = make_cloze_set(parts.test, vocab, 50, 804);
  const auto report = run_infrequent_cloze(systems, cloze, rank, {0, 2, 4}, 3, threads);
  a.files["cloze"] = serialize([&](std::ostream& o) { write_cloze_report(o, report); });

  const std::vector<NamedPairScore> named{{"causal", std::cref(scores)},
                                          {"pmi", [&](EventId k, EventId l) {
                                             return ordered_pmi(counts, k, l, true);
                                           }}};
  const auto targets = sample_targets(rank, 3, 0, 805);
  const auto sheet = pairwise_sheet(named, targets, 2, 0, rank, 806);
  a.files["sheet"] = serialize([&](std::ostream& o) { write_sheet(o, sheet, vocab); });
  return a;
}

const Artifacts& pipeline_artifacts() {
  static std::optional<Artifacts> a;
  if (!a) a = run_pipeline(1);
  return *a;
}

Outcome criterion8() {
  const auto& first = pipeline_artifacts();
  const auto again = run_pipeline(1);
  const auto threaded = run_pipeline(4);
  std::vector<std::string> differing;
  for (const auto& [name, bytes] : first.files)
    if (again.files.at(name) != bytes || threaded.files.at(name) != bytes) differing.push_back(name);
  std::string detail = std::to_string(first.files.size()) + " artifacts compared";
  for (const auto& d : differing) detail += ", differs: " + d;
  return {differing.empty(), detail};
}

Outcome criterion9() {
  const auto& a = pipeline_artifacts();
  std::vector<std::string> broken;
  auto check = [&](const std::string& name, const std::string& rewritten) {
    if (rewritten != a.files.at(name)) broken.push_back(name);
  };
  {
    std::istringstream in(a.files.at("corpus"));
    const auto c = read_chains(in, false, "corpus");
    check("corpus", serialize([&](std::ostream& o) { write_chains(o, c); }));
  }
  {
    std::istringstream in(a.files.at("vocab"));
    const auto v = Vocabulary::read(in);
    check("vocab", serialize([&](std::ostream& o) { v.write(o); }));
  }
  for (const std::string name : {"lm", "cond", "cond-ft"}) {
    std::istringstream in(a.files.at(name), std::ios::binary);
    const auto file = read_model(in, name);
    std::string again;
    if (file.kind == "event-lm")
      again = serialize([&](std::ostream& o) { write_model(o, EventLm::from_file(file).to_file()); });
    else
      again = serialize(
          [&](std::ostream& o) { write_model(o, ConditionalModel::from_file(file).to_file()); });
    check(name, again);
  }
  {
    std::istringstream in(a.files.at("itable"), std::ios::binary);
    const auto t = read_itable(in, "itable");
    check("itable", serialize([&](std::ostream& o) { write_itable(o, t); }));
  }
  std::string detail = "corpus, vocab, 3 models, itable";
  for (const auto& b : broken) detail += ", changed: " + b;
  return {broken.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3,
                                                       criterion4, criterion5, criterion6,
                                                       criterion7, criterion8, criterion9};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(n)) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
