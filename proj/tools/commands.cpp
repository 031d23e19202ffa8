#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "scriptcausal/conditional_model.hpp"
#include "scriptcausal/corpus_io.hpp"
#include "scriptcausal/errors.hpp"
#include "scriptcausal/eval.hpp"
#include "scriptcausal/event_lm.hpp"
#include "scriptcausal/interventions.hpp"
#include "scriptcausal/model_checks.hpp"
#include "scriptcausal/model_io.hpp"
#include "scriptcausal/pmi.hpp"
#include "scriptcausal/rng.hpp"
#include "scriptcausal/synth.hpp"

namespace scriptcausal::cli {

namespace {

namespace fs = std::filesystem;
using Outputs = std::vector<std::string>;

std::vector<std::vector<EventId>> corpus_ids(const ChainCorpus& corpus, const Vocabulary& vocab) {
  std::vector<std::vector<EventId>> out;
  out.reserve(corpus.chains.size());
  for (const auto& c : corpus.chains) out.push_back(chain_ids(c, vocab));
  return out;
}

// Writes to cfg[key] when set, else to stdout.
template <class F>
void emit(const RunConfig& cfg, const std::string& key, Outputs& outputs, F&& write) {
  if (!cfg.has(key)) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  const auto path = cfg.path(key);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_invalid(key + ": cannot open " + path + " for writing");
  write(out);
  if (!out) throw_invalid(key + ": write failed: " + path);
  outputs.push_back(path);
}

void save_model_file(const std::string& path, const ModelFile& file, Outputs& outputs) {
  save_model(path, file);
  outputs.push_back(path);
}

EventLm load_lm(const std::string& path) { return EventLm::from_file(load_model(path)); }
ConditionalModel load_conditional(const std::string& path) {
  return ConditionalModel::from_file(load_model(path));
}

SyntheticCbn load_cbn_from(const RunConfig& cfg) {
  if (cfg.has("fixture") == cfg.has("cbn")) throw_invalid("fixture/cbn: set exactly one of them");
  return cfg.has("fixture") ? build_fixture(cfg.text("fixture")) : load_cbn(cfg.path("cbn"));
}

std::array<double, 3> parse_ratios(const std::string& raw) {
  std::array<double, 3> r{};
  std::istringstream in(raw);
  std::string item;
  std::size_t n = 0;
  while (std::getline(in, item, ',')) {
    if (n == 3) throw_invalid("ratios: expected three comma-separated numbers");
    try {
      std::size_t pos = 0;
      r[n] = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw_invalid("ratios: not a number: '" + item + "'");
    }
    ++n;
  }
  if (n != 3) throw_invalid("ratios: expected three comma-separated numbers");
  return r;
}

void check_vocab_size(const Vocabulary& vocab, std::size_t model_size, const std::string& what) {
  if (vocab.size() != model_size)
    throw_invalid(what + ": built for " + std::to_string(model_size) +
                  " events but the vocabulary has " + std::to_string(vocab.size()));
}

void log_epochs(const char* what, const std::vector<double>& train, const std::vector<double>& dev,
                std::size_t best) {
  for (std::size_t e = 0; e < dev.size(); ++e) {
    std::fprintf(stderr, "%s epoch %zu", what, e + 1);
    if (e < train.size() && !std::isnan(train[e])) std::fprintf(stderr, " train %.5f", train[e]);
    std::fprintf(stderr, " dev %.5f\n", dev[e]);
  }
  std::fprintf(stderr, "%s best epoch %zu\n", what, best);
}

// Pairwise scorers named on the command line, with the data they borrow.
// Held by pointer so the scorers stay valid when the struct moves.
struct Scorers {
  std::unique_ptr<InterventionTable> table;
  std::unique_ptr<ScriptScores> causal;
  std::unique_ptr<OrderedCounts> counts;
  std::unique_ptr<EventLm> lm;

  PairScore get(const std::string& name, bool discounted) const {
    if (name == "causal") return std::cref(*causal);
    if (name == "pmi") {
      const OrderedCounts* c = counts.get();
      return [c, discounted](EventId k, EventId l) { return ordered_pmi(*c, k, l, discounted); };
    }
    const EventLm* m = lm.get();
    return [m](EventId k, EventId l) {
      const EventId ctx[] = {k};
      return m->chain_score(ctx, l);
    };
  }
};

// Checks that every requested system has its input, before anything runs.
void require_system_inputs(const RunConfig& cfg, const std::vector<std::string>& systems) {
  if (systems.empty()) throw_invalid("systems: at least one system is required");
  for (const auto& s : systems) {
    const char* key = s == "causal" ? "itable" : s == "pmi" ? "pmi_counts" : s == "lm" ? "lm" : nullptr;
    if (!key) throw_invalid("systems: unknown system '" + s + "' (expected lm, causal or pmi)");
    if (!cfg.has(key)) throw_invalid(std::string(key) + ": required by system " + s);
  }
}

Scorers load_scorers(const RunConfig& cfg, const std::vector<std::string>& systems,
                     const Vocabulary& vocab) {
  Scorers s;
  for (const auto& name : systems) {
    if (name == "causal" && !s.table) {
      s.table = std::make_unique<InterventionTable>(load_itable(cfg.path("itable")));
      check_vocab_size(vocab, s.table->size(), "itable");
      s.causal = std::make_unique<ScriptScores>(*s.table, chain_event_mask(vocab));
    } else if (name == "pmi" && !s.counts) {
      std::ifstream in(cfg.path("pmi_counts"));
      s.counts = std::make_unique<OrderedCounts>(read_counts(in, vocab, cfg.path("pmi_counts")));
    } else if (name == "lm" && !s.lm) {
      s.lm = std::make_unique<EventLm>(load_lm(cfg.path("lm")));
      check_vocab_size(vocab, s.lm->vocab_size(), "lm");
    }
  }
  return s;
}

EventId event_id(const Vocabulary& vocab, const std::string& key, const std::string& field) {
  const auto id = vocab.find(key);
  if (!id || !vocab.is_chain_event(*id)) throw_invalid(field + ": unknown event '" + key + "'");
  return *id;
}

// --- commands ---------------------------------------------------------------

Outputs cmd_ingest(const RunConfig& cfg) {
  const auto corpus = load_chains(cfg.path("input"), cfg.flag("factual_only"));
  Outputs out;
  save_chains(cfg.path("out"), corpus);
  out.push_back(cfg.path("out"));
  std::fprintf(stderr, "ingested %zu chains, %zu events\n", corpus.chains.size(), corpus.num_events());
  return out;
}

Outputs cmd_split(const RunConfig& cfg) {
  const auto ratios = parse_ratios(cfg.text("ratios"));
  const auto corpus = load_chains(cfg.path("corpus"), false);
  const auto parts = split_corpus(corpus, ratios, cfg.count("seed"));
  const fs::path dir = cfg.path("out_dir");
  fs::create_directories(dir);
  Outputs out;
  for (const auto& [name, part] : {std::pair{"train.jsonl", &parts.train},
                                   std::pair{"dev.jsonl", &parts.dev},
                                   std::pair{"test.jsonl", &parts.test}}) {
    save_chains((dir / name).string(), *part);
    out.push_back((dir / name).string());
  }
  return out;
}

Outputs cmd_vocab(const RunConfig& cfg) {
  const auto corpus = load_chains(cfg.path("corpus"), false);
  const auto vocab = build_vocab_from(corpus, cfg.count("min_count"));
  vocab.save(cfg.path("out"));
  std::fprintf(stderr, "vocabulary: %zu events\n", vocab.num_events());
  return {cfg.path("out")};
}

Outputs cmd_count_pmi(const RunConfig& cfg) {
  const auto vocab = Vocabulary::load(cfg.path("vocab"));
  const auto corpus = load_chains(cfg.path("corpus"), false);
  const auto counts = count_skip_bigrams(corpus_ids(corpus, vocab), vocab.size(), cfg.count("window"),
                                         cfg.flag("self_pairs"), cfg.count("threads"));
  Outputs out;
  emit(cfg, "out", out, [&](std::ostream& o) { write_counts(o, counts, vocab); });
  return out;
}

Outputs cmd_train_lm(const RunConfig& cfg) {
  const auto vocab = Vocabulary::load(cfg.path("vocab"));
  const auto train = load_chains(cfg.path("corpus"), false);
  const auto dev = load_chains(cfg.path("dev"), false);
  EventLmConfig c;
  c.input_dim = cfg.count("lm_input_dim");
  c.hidden = cfg.count("lm_hidden");
  c.dropout = cfg.real("dropout");
  c.lr = cfg.real("lm_lr");
  c.clip_norm = cfg.real("clip");
  c.batch_size = cfg.count("lm_batch");
  c.patience = cfg.count("patience");
  c.max_epochs = cfg.count("max_epochs");
  c.seed = cfg.count("seed");
  c.threads = cfg.count("threads");
  LmTrainReport report;
  const auto lm = train_event_lm(corpus_ids(train, vocab), corpus_ids(dev, vocab), vocab.size(), c,
                                 &report);
  log_epochs("lm", report.train_loss, report.dev_loss, report.best_epoch);
  Outputs out;
  save_model_file(cfg.path("out"), lm.to_file(), out);
  return out;
}

ConditionalConfig conditional_config(const RunConfig& cfg) {
  ConditionalConfig c;
  if (cfg.values().contains("dim")) c.dim = cfg.count("dim");
  if (cfg.values().contains("hidden")) c.hidden = cfg.count("hidden");
  if (cfg.values().contains("text_mode")) c.text_mode = parse_text_mode(cfg.text("text_mode"));
  if (cfg.values().contains("lr")) c.lr = cfg.real("lr");
  if (cfg.values().contains("finetune_lr")) c.finetune_lr = cfg.real("finetune_lr");
  if (cfg.values().contains("max_epochs")) c.max_epochs = cfg.count("max_epochs");
  if (cfg.values().contains("finetune_max_epochs"))
    c.finetune_max_epochs = cfg.count("finetune_max_epochs");
  c.clip_norm = cfg.real("clip");
  c.batch_size = cfg.count("batch");
  c.patience = cfg.count("patience");
  c.seed = cfg.count("seed");
  c.threads = cfg.count("threads");
  return c;
}

int oot_threshold(const RunConfig& cfg) {
  const auto t = cfg.count("oot_threshold");
  if (t > 4) throw_invalid("oot_threshold: ratings range over 0..4");
  return static_cast<int>(t);
}

Outputs cmd_train_cond(const RunConfig& cfg) {
  const auto c = conditional_config(cfg);
  const auto vocab = Vocabulary::load(cfg.path("vocab"));
  const auto train_corpus = load_chains(cfg.path("corpus"), false);
  const auto dev_corpus = load_chains(cfg.path("dev"), false);
  const auto tokens = build_token_vocab(train_corpus, cfg.count("token_min_count"));
  const auto window = cfg.count("history");
  const auto train = extract_training_instances(train_corpus, vocab, tokens, oot_threshold(cfg), window);
  const auto dev = extract_training_instances(dev_corpus, vocab, tokens, oot_threshold(cfg), window);
  ConditionalTrainReport report;
  const auto model = train_conditional(train, dev, vocab.size(), tokens.tokens(), c, &report);
  log_epochs("pretrain", report.train_loss, report.dev_loss, report.best_epoch);
  Outputs out;
  save_model_file(cfg.path("out"), model.to_file(), out);
  return out;
}

Outputs cmd_finetune_cond(const RunConfig& cfg) {
  const auto c = conditional_config(cfg);
  const auto vocab = Vocabulary::load(cfg.path("vocab"));
  const auto model = load_conditional(cfg.path("model"));
  check_vocab_size(vocab, model.vocab_size(), "model");
  const auto tokens = model.token_vocabulary();
  const auto window = cfg.count("history");
  const auto train = extract_training_instances(load_chains(cfg.path("corpus"), false), vocab,
                                                tokens, oot_threshold(cfg), window);
  const auto dev = extract_training_instances(load_chains(cfg.path("dev"), false), vocab, tokens,
                                              oot_threshold(cfg), window);
  ConditionalTrainReport report;
  const auto tuned = finetune_with_oot(model, train, dev, c, &report);
  log_epochs("finetune", report.train_loss, report.dev_loss, report.best_epoch);
  Outputs out;
  save_model_file(cfg.path("out"), tuned.to_file(), out);
  return out;
}

Outputs cmd_estimate_do(const RunConfig& cfg) {
  const auto vocab = Vocabulary::load(cfg.path("vocab"));
  const auto model = load_conditional(cfg.path("model"));
  check_vocab_size(vocab, model.vocab_size(), "model");
  const auto instances =
      extract_training_instances(load_chains(cfg.path("corpus"), false), vocab,
                                 model.token_vocabulary(), oot_threshold(cfg), cfg.count("history"));
  const auto set = sample_adjustment_set(instances, cfg.count("samples"), cfg.count("seed"));
  const auto id = cfg.has("model_id") ? cfg.text("model_id") : fs::path(cfg.path("model")).filename().string();
  const auto table = estimate_interventions(model, set, id, cfg.count("threads"));
  Outputs out;
  save_itable(cfg.path("out"), table);
  out.push_back(cfg.path("out"));
  if (cfg.has("tsv_out"))
    emit(cfg, "tsv_out", out, [&](std::ostream& o) { write_itable_tsv(o, table, vocab); });
  return out;
}

std::vector<std::string> single_system(const RunConfig& cfg) {
  const auto s = cfg.text("system");
  if (s != "causal" && s != "pmi" && s != "lm")
    throw_invalid("system: expected causal, pmi or lm, got '" + s + "'");
  return {s};
}

Outputs cmd_score(const RunConfig& cfg) {
  const auto systems = single_system(cfg);
  require_system_inputs(cfg, systems);
  const auto vocab = Vocabulary::load(cfg.path("vocab"));
  std::vector<EventId> targets;
  if (cfg.has("target")) targets.push_back(event_id(vocab, cfg.text("target"), "target"));
  const auto scorers = load_scorers(cfg, systems, vocab);
  const auto score = scorers.get(systems[0], cfg.flag("discounted"));
  const auto rank = frequency_rank(vocab);
  if (targets.empty()) targets = rank;
  Outputs out;
  emit(cfg, "out", out, [&](std::ostream& o) {
    o << "target_event\trank\tpredecessor_event\tscore\n";
    for (const auto l : targets) {
      const auto preds = top_predecessors(score, l, cfg.count("topk"), cfg.count("exclude_top"), rank);
      for (std::size_t i = 0; i < preds.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", score(preds[i], l));
        o << vocab.key(l) << '\t' << i + 1 << '\t' << vocab.key(preds[i]) << '\t' << buf << '\n';
      }
    }
  });
  return out;
}

Outputs cmd_complete(const RunConfig& cfg) {
  const auto systems = single_system(cfg);
  require_system_inputs(cfg, systems);
  const auto vocab = Vocabulary::load(cfg.path("vocab"));
  std::vector<EventId> context;
  for (const auto& key : cfg.texts("context")) context.push_back(event_id(vocab, key, "context"));
  if (context.empty()) throw_invalid("context: at least one event is required");
  const auto scorers = load_scorers(cfg, systems, vocab);
  const auto rank = frequency_rank(vocab);
  const auto n = cfg.count("topk");
  std::vector<EventId> best;
  if (systems[0] == "lm") {
    auto mask = chain_event_mask(vocab);
    const auto top = top_frequency_mask(rank, vocab.size(), cfg.count("exclude_top"));
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = mask[i] && !top[i];
    best = LmClozeSystem("lm", *scorers.lm, mask).top_n(context, n);
  } else {
    best = rank_completions(scorers.get(systems[0], cfg.flag("discounted")), context, n,
                            cfg.count("exclude_top"), rank);
  }
  Outputs out;
  emit(cfg, "out", out, [&](std::ostream& o) {
    o << "rank\tevent\n";
    for (std::size_t i = 0; i < best.size(); ++i) o << i + 1 << '\t' << vocab.key(best[i]) << '\n';
  });
  return out;
}

Outputs cmd_synth(const RunConfig& cfg) {
  const auto cbn = load_cbn_from(cfg);
  const auto corpus = sample_chains(cbn, cfg.count("chains"), cfg.count("seed"), cfg.flag("annotate"),
                                    cfg.count("threads"));
  Outputs out;
  save_chains(cfg.path("out"), corpus);
  out.push_back(cfg.path("out"));
  return out;
}

void write_rows(std::ostream& o, const SyntheticCbn& cbn,
                const std::function<std::vector<double>(std::size_t)>& row) {
  o << "prev_event\tnext_event\tprobability\n";
  char buf[40];
  for (std::size_t k = 0; k < cbn.num_events(); ++k) {
    const auto p = row(k);
    for (std::size_t l = 0; l < p.size(); ++l) {
      std::snprintf(buf, sizeof buf, "%.17g", p[l]);
      o << cbn.events[k] << '\t' << cbn.events[l] << '\t' << buf << '\n';
    }
  }
}

Outputs cmd_oracle(const RunConfig& cfg) {
  const auto cbn = load_cbn_from(cfg);
  const fs::path dir = cfg.path("out_dir");
  fs::create_directories(dir);
  Outputs out;
  auto write = [&](const char* name, const std::function<std::vector<double>(std::size_t)>& row) {
    const auto path = (dir / name).string();
    std::ofstream o(path, std::ios::binary);
    if (!o) throw_invalid("out_dir: cannot write " + path);
    write_rows(o, cbn, row);
    out.push_back(path);
  };
  write("interventional.tsv", [&](std::size_t k) { return exact_do_distribution(cbn, k); });
  write("observational.tsv", [&](std::size_t k) { return pooled_conditional(cbn, k); });
  return out;
}

Outputs cmd_cloze(const RunConfig& cfg) {
  const auto names = cfg.texts("systems");
  require_system_inputs(cfg, names);
  const auto vocab = Vocabulary::load(cfg.path("vocab"));
  const auto scorers = load_scorers(cfg, names, vocab);
  const auto rank = frequency_rank(vocab);
  std::vector<std::unique_ptr<ClozeSystem>> owned;
  for (const auto& name : names) {
    if (name == "lm")
      owned.push_back(std::make_unique<LmClozeSystem>(name, *scorers.lm, chain_event_mask(vocab)));
    else
      owned.push_back(
          std::make_unique<PairwiseClozeSystem>(name, scorers.get(name, cfg.flag("discounted")), rank));
  }
  std::vector<const ClozeSystem*> systems;
  for (const auto& s : owned) systems.push_back(s.get());
  const auto instances = make_cloze_set(load_chains(cfg.path("corpus"), false), vocab,
                                        cfg.count("cloze_count"), cfg.count("seed"));
  const auto report = run_infrequent_cloze(systems, instances, rank, cfg.counts("cutoffs"),
                                           cfg.count("recall_n"), cfg.count("threads"));
  Outputs out;
  emit(cfg, "out", out, [&](std::ostream& o) { write_cloze_report(o, report); });
  return out;
}

Outputs cmd_sheet(const RunConfig& cfg) {
  const auto names = cfg.texts("systems");
  require_system_inputs(cfg, names);
  const auto vocab = Vocabulary::load(cfg.path("vocab"));
  const auto scorers = load_scorers(cfg, names, vocab);
  const auto rank = frequency_rank(vocab);
  std::vector<NamedPairScore> systems;
  for (const auto& name : names) systems.push_back({name, scorers.get(name, cfg.flag("discounted"))});
  const auto targets = sample_targets(rank, cfg.count("targets"), cfg.count("exclude_top"),
                                      derive_seed(cfg.count("seed"), 1));
  const auto rows = pairwise_sheet(systems, targets, cfg.count("per_system"), cfg.count("exclude_top"),
                                   rank, derive_seed(cfg.count("seed"), 2));
  Outputs out;
  emit(cfg, "out", out, [&](std::ostream& o) { write_sheet(o, rows, vocab); });
  return out;
}

Outputs cmd_score_summary(const RunConfig& cfg) {
  std::ifstream in(cfg.path("input"));
  const auto summary = summarize_scores(in, cfg.path("input"));
  Outputs out;
  emit(cfg, "out", out, [&](std::ostream& o) { write_score_summary(o, summary); });
  if (cfg.has("paired_out"))
    emit(cfg, "paired_out", out, [&](std::ostream& o) { write_paired_scores(o, summary); });
  return out;
}

Outputs cmd_diversity(const RunConfig& cfg) {
  std::ifstream in(cfg.path("input"));
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> emissions;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw_format(cfg.path("input") + ":" + std::to_string(lineno) +
                   ": expected system<TAB>event");
    const auto system = line.substr(0, tab);
    if (!emissions.count(system)) order.push_back(system);
    emissions[system].push_back(line.substr(tab + 1));
  }
  if (order.empty()) throw_format(cfg.path("input") + ": no emissions");
  std::vector<DiversityStats> stats;
  for (const auto& s : order) stats.push_back(diversity_report(s, emissions[s]));
  Outputs out;
  emit(cfg, "out", out, [&](std::ostream& o) { write_diversity(o, stats); });
  return out;
}

Outputs cmd_gradcheck(const RunConfig& cfg) {
  const auto which = cfg.text("check");
  if (which != "lm" && which != "cond" && which != "all")
    throw_invalid("check: expected lm, cond or all, got '" + which + "'");
  GradCheckSetup setup;
  setup.eps = cfg.real("eps");
  setup.param_scale = cfg.real("param_scale");
  setup.batch = cfg.count("check_batch");
  setup.seed = cfg.count("seed");
  if (!(setup.eps > 0)) throw_invalid("eps: must be positive");
  if (setup.batch == 0) throw_invalid("check_batch: must be positive");

  std::vector<std::pair<std::string, GradCheckResult>> results;
  if (which != "cond") results.emplace_back("lm", check_event_lm_gradients(setup));
  if (which != "lm")
    for (const auto mode : {TextMode::mean, TextMode::cnn})
      for (const bool oot : {false, true})
        results.emplace_back("conditional-" + std::string(to_string(mode)) + (oot ? "-oot" : ""),
                             check_conditional_gradients(setup, mode, oot));
  double worst = 0.0;
  Outputs out;
  emit(cfg, "out", out, [&](std::ostream& o) {
    o << "model\tchecked\tmax_rel_error\tworst_param\tanalytic\tnumeric\n";
    char buf[128];
    for (const auto& [name, r] : results) {
      worst = std::max(worst, r.max_rel_error);
      std::snprintf(buf, sizeof buf, "%.3e\t%s[%zu]\t%.6e\t%.6e", r.max_rel_error,
                    r.worst_param.c_str(), r.worst_index, r.worst_analytic, r.worst_numeric);
      o << name << '\t' << r.checked << '\t' << buf << '\n';
    }
  });
  if (!(worst < 1e-4)) throw_numerical("gradient check failed: max relative error " + std::to_string(worst));
  return out;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all{
      {"ingest", "canonicalize a chain corpus, dropping non-factual events",
       {"input", "out", "factual_only"}, {"input", "out"}, cmd_ingest},
      {"split", "seeded chain-level train/dev/test split",
       {"corpus", "out_dir", "ratios"}, {"corpus", "out_dir"}, cmd_split},
      {"vocab", "build the event vocabulary", {"corpus", "out", "min_count"}, {"corpus", "out"},
       cmd_vocab},
      {"count-pmi", "count ordered skip-bigrams",
       {"corpus", "vocab", "out", "window", "self_pairs"}, {"corpus", "vocab"}, cmd_count_pmi},
      {"train-lm", "train the event language model baseline",
       {"corpus", "dev", "vocab", "out", "lm_input_dim", "lm_hidden", "dropout", "lm_lr", "lm_batch",
        "clip", "patience", "max_epochs"},
       {"corpus", "dev", "vocab", "out"}, cmd_train_lm},
      {"train-cond", "pretrain the conditional next-event model",
       {"corpus", "dev", "vocab", "out", "dim", "hidden", "text_mode", "lr", "batch", "clip",
        "patience", "max_epochs", "history", "oot_threshold", "token_min_count"},
       {"corpus", "dev", "vocab", "out"}, cmd_train_cond},
      {"finetune-cond", "finetune the conditional model with out-of-text events",
       {"model", "corpus", "dev", "vocab", "out", "finetune_lr", "batch", "clip", "patience",
        "finetune_max_epochs", "history", "oot_threshold"},
       {"model", "corpus", "dev", "vocab", "out"}, cmd_finetune_cond},
      {"estimate-do", "estimate the intervention table",
       {"model", "corpus", "vocab", "out", "tsv_out", "samples", "history", "oot_threshold",
        "model_id"},
       {"model", "corpus", "vocab", "out"}, cmd_estimate_do},
      {"score", "top predecessors of target events",
       {"vocab", "system", "itable", "pmi_counts", "lm", "target", "topk", "exclude_top",
        "discounted", "out"},
       {"vocab"}, cmd_score},
      {"complete", "rank completions of a chain",
       {"vocab", "system", "itable", "pmi_counts", "lm", "context", "topk", "exclude_top",
        "discounted", "out"},
       {"vocab", "context"}, cmd_complete},
      {"synth", "sample chains from a synthetic CBN",
       {"fixture", "cbn", "chains", "annotate", "out"}, {"out"}, cmd_synth},
      {"oracle", "exact interventional and observational distributions of a CBN",
       {"fixture", "cbn", "out_dir"}, {"out_dir"}, cmd_oracle},
      {"cloze", "infrequent narrative cloze",
       {"corpus", "vocab", "systems", "lm", "itable", "pmi_counts", "cutoffs", "recall_n",
        "cloze_count", "discounted", "out"},
       {"corpus", "vocab"}, cmd_cloze},
      {"sheet", "pairwise annotation task sheet",
       {"vocab", "systems", "lm", "itable", "pmi_counts", "targets", "per_system", "exclude_top",
        "discounted", "out"},
       {"vocab"}, cmd_sheet},
      {"score-summary", "average score and rank per system from a filled sheet",
       {"input", "out", "paired_out"}, {"input"}, cmd_score_summary},
      {"diversity", "%-new and top-2 usage of generated events", {"input", "out"}, {"input"},
       cmd_diversity},
      {"gradcheck", "finite-difference check of the model gradients",
       {"check", "eps", "param_scale", "check_batch", "out"}, {}, cmd_gradcheck},
  };
  return all;
}

}  // namespace scriptcausal::cli
