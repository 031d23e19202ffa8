#include "scriptcausal/conditional_model.hpp"

#include <algorithm>
#include <limits>
#include <json.hpp>

#include "scriptcausal/adam.hpp"
#include "scriptcausal/errors.hpp"
#include "scriptcausal/loss.hpp"
#include "scriptcausal/parallel.hpp"
#include "scriptcausal/params.hpp"
#include "scriptcausal/rng.hpp"

namespace scriptcausal {

std::vector<ConditionalInstance> extract_training_instances(const ChainCorpus& corpus,
                                                            const Vocabulary& vocab,
                                                            const TokenVocabulary& tokens,
                                                            int oot_threshold,
                                                            std::size_t window) {
  std::vector<ConditionalInstance> out;
  for (std::size_t c = 0; c < corpus.chains.size(); ++c) {
    const auto& chain = corpus.chains[c];
    const auto ids = chain_ids(chain, vocab);
    for (std::size_t i = 1; i < ids.size(); ++i) {
      ConditionalInstance inst;
      inst.target = ids[i];
      inst.chain = c;
      inst.position = i;
      auto& ctx = inst.context;
      ctx.prev = ids[i - 1];
      const std::size_t lo = i - 1 > window ? i - 1 - window : 0;
      ctx.history.assign(ids.begin() + static_cast<std::ptrdiff_t>(lo),
                         ids.begin() + static_cast<std::ptrdiff_t>(i - 1));
      const auto& prev_event = chain.events[i - 1];
      if (prev_event.text)
        for (const auto& t : *prev_event.text) ctx.text.push_back(tokens.lookup(t));
      if (prev_event.oot) {
        for (const auto& cand : *prev_event.oot) {
          if (cand.rating < oot_threshold) continue;
          if (auto id = vocab.find(cand.key)) ctx.oot.push_back(*id);
        }
      }
      out.push_back(std::move(inst));
    }
  }
  return out;
}

ConditionalModel::ConditionalModel(std::size_t vocab_size, std::vector<std::string> tokens,
                                   std::size_t dim, std::size_t hidden, TextMode mode,
                                   std::uint64_t seed)
    : tokens_(TokenVocabulary(std::move(tokens)).tokens()) {
  if (vocab_size <= kNumSpecialIds || dim == 0 || hidden == 0)
    throw_invalid("conditional model needs a non-empty vocabulary and positive dimensions");
  Rng rng(seed);
  params_.event_embeddings = Tensor::matrix(vocab_size, dim);
  init_uniform(params_.event_embeddings, 0.1, rng);
  params_.encoder = GruParams::random(dim, hidden, rng);
  params_.text = TextEncoderParams::random(mode, tokens_.size(), dim, rng);
  params_.a = Tensor::matrix(vocab_size, hidden);
  init_xavier(params_.a, rng);
  params_.b = Tensor::matrix(vocab_size, dim);
  init_xavier(params_.b, rng);
}

void ConditionalModel::begin_finetune() {
  if (!params_.has_oot()) params_.w_o = Tensor::matrix(vocab_size(), dim());
}

void ConditionalModel::check_context(const ConditionalContext& ctx) const {
  const std::size_t v = vocab_size();
  if (ctx.history.size() > kHistoryWindow) throw_invalid("context history longer than the window");
  if (ctx.prev >= v) throw_invalid("context prev event out of range");
  for (auto id : ctx.history)
    if (id >= v) throw_invalid("context history id out of range");
  for (auto id : ctx.oot)
    if (id >= v) throw_invalid("context out-of-text id out of range");
}

std::vector<double> ConditionalModel::text_and_oot(const ConditionalContext& ctx) const {
  const auto& p = params_;
  std::vector<double> base(vocab_size(), 0.0);
  if (!ctx.text.empty()) matvec_acc(p.b, encode_text(p.text, ctx.text), base);
  if (p.has_oot()) {
    std::vector<double> vo(dim(), 0.0);
    if (!ctx.oot.empty()) {
      for (auto id : ctx.oot) axpy(1.0, p.event_embeddings.row(id), vo);
      const double inv = 1.0 / static_cast<double>(ctx.oot.size());
      for (auto& x : vo) x *= inv;
    }
    matvec_acc(p.w_o, vo, base);
  }
  return base;
}

ContextPrefix ConditionalModel::prefix(const ConditionalContext& ctx) const {
  check_context(ctx);
  ContextPrefix pre;
  pre.history_state.assign(hidden(), 0.0);
  for (auto id : ctx.history)
    pre.history_state = gru_step(params_.encoder, params_.event_embeddings.row(id), pre.history_state);
  pre.base_logits = text_and_oot(ctx);
  return pre;
}

std::vector<double> ConditionalModel::distribution_with_prev(const ContextPrefix& pre,
                                                             EventId prev) const {
  if (prev >= vocab_size()) throw_invalid("prev event out of range");
  const auto h = gru_step(params_.encoder, params_.event_embeddings.row(prev), pre.history_state);
  std::vector<double> out = pre.base_logits;
  matvec_acc(params_.a, h, out);
  softmax_inplace(out);
  return out;
}

std::vector<double> ConditionalModel::logits(const ConditionalContext& ctx) const {
  auto pre = prefix(ctx);
  const auto h = gru_step(params_.encoder, params_.event_embeddings.row(ctx.prev), pre.history_state);
  matvec_acc(params_.a, h, pre.base_logits);
  return pre.base_logits;
}

std::vector<double> ConditionalModel::distribution(const ConditionalContext& ctx) const {
  auto out = logits(ctx);
  softmax_inplace(out);
  return out;
}

std::vector<ConditionalModel::Run> ConditionalModel::group_runs(
    std::span<const ConditionalInstance> instances) {
  std::vector<Run> runs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& ctx = instances[i].context;
    bool extends = false;
    if (!runs.empty()) {
      const auto& seq = runs.back().sequence;
      extends = ctx.history.size() == seq.size() &&
                std::equal(seq.begin(), seq.end(), ctx.history.begin());
    }
    if (!extends) {
      runs.push_back({});
      runs.back().sequence = ctx.history;
    }
    runs.back().sequence.push_back(ctx.prev);
    runs.back().members.push_back(i);
  }
  return runs;
}

double ConditionalModel::run_loss(const Run& run, std::span<const ConditionalInstance> instances,
                                  ConditionalParams* grad, double scale) const {
  const auto& p = params_;
  const std::size_t steps = run.sequence.size();
  const std::size_t first = steps - run.members.size();
  std::vector<std::vector<double>> x(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    auto e = p.event_embeddings.row(run.sequence[t]);
    x[t].assign(e.begin(), e.end());
  }
  const auto cache = gru_forward(p.encoder, x);
  std::vector<std::vector<double>> dh(steps, std::vector<double>(hidden(), 0.0));
  const bool use_oot = p.has_oot();

  double total = 0.0;
  TextCache tcache;
  for (std::size_t m = 0; m < run.members.size(); ++m) {
    const std::size_t t = first + m;
    const auto& inst = instances[run.members[m]];
    const auto& ctx = inst.context;
    std::vector<double> logits(vocab_size(), 0.0), vt, vo;
    if (!ctx.text.empty()) {
      vt = encode_text(p.text, ctx.text, &tcache);
      matvec_acc(p.b, vt, logits);
    }
    if (use_oot) {
      vo.assign(dim(), 0.0);
      if (!ctx.oot.empty()) {
        for (auto id : ctx.oot) axpy(1.0, p.event_embeddings.row(id), vo);
        const double inv = 1.0 / static_cast<double>(ctx.oot.size());
        for (auto& v : vo) v *= inv;
      }
      matvec_acc(p.w_o, vo, logits);
    }
    matvec_acc(p.a, cache[t].h, logits);
    auto xent = softmax_xent(logits, inst.target);
    total += xent.loss;
    if (!grad) continue;

    auto& dl = xent.grad;
    for (auto& g : dl) g *= scale;
    outer_acc(grad->a, dl, cache[t].h);
    matvec_t_acc(p.a, dl, dh[t]);
    if (!ctx.text.empty()) {
      outer_acc(grad->b, dl, vt);
      std::vector<double> dvt(dim(), 0.0);
      matvec_t_acc(p.b, dl, dvt);
      encode_text_backward(p.text, tcache, dvt, grad->text);
    }
    if (use_oot) {
      outer_acc(grad->w_o, dl, vo);
      if (!ctx.oot.empty()) {
        std::vector<double> dvo(dim(), 0.0);
        matvec_t_acc(p.w_o, dl, dvo);
        const double inv = 1.0 / static_cast<double>(ctx.oot.size());
        for (auto id : ctx.oot) axpy(inv, dvo, grad->event_embeddings.row(id));
      }
    }
  }
  if (grad) {
    const auto dx = gru_backward(p.encoder, cache, dh, grad->encoder);
    for (std::size_t t = 0; t < steps; ++t) axpy(1.0, dx[t], grad->event_embeddings.row(run.sequence[t]));
  }
  return total;
}

double ConditionalModel::loss(std::span<const ConditionalInstance> instances,
                              ConditionalParams* grad, double normalizer) const {
  if (instances.empty()) throw_invalid("conditional loss over no instances");
  if (normalizer <= 0.0) normalizer = static_cast<double>(instances.size());
  for (const auto& inst : instances) {
    check_context(inst.context);
    if (inst.target >= vocab_size()) throw_invalid("instance target out of range");
  }
  double total = 0.0;
  for (const auto& run : group_runs(instances)) total += run_loss(run, instances, grad, 1.0 / normalizer);
  return total / normalizer;
}

ModelFile ConditionalModel::to_file() const {
  ModelFile f;
  f.kind = "conditional";
  nlohmann::ordered_json cfg;
  cfg["phase"] = phase() == ModelPhase::finetuned ? "finetuned" : "pretrained";
  cfg["vocab_size"] = vocab_size();
  cfg["dim"] = dim();
  cfg["hidden"] = hidden();
  cfg["text_mode"] = std::string(to_string(text_mode()));
  cfg["tokens"] = tokens_;
  f.config_json = cfg.dump();
  auto copy = params_;
  f.arrays = export_arrays(copy);
  return f;
}

ConditionalModel ConditionalModel::from_file(const ModelFile& f) {
  if (f.kind != "conditional") throw_format("expected a conditional model, found '" + f.kind + "'");
  try {
    const auto cfg = nlohmann::json::parse(f.config_json);
    const std::string phase = cfg.at("phase").get<std::string>();
    if (phase != "pretrained" && phase != "finetuned") throw_format("unknown model phase '" + phase + "'");
    ConditionalModel m(cfg.at("vocab_size").get<std::size_t>(),
                       cfg.at("tokens").get<std::vector<std::string>>(), cfg.at("dim").get<std::size_t>(),
                       cfg.at("hidden").get<std::size_t>(),
                       parse_text_mode(cfg.at("text_mode").get<std::string>()), 1);
    if (phase == "finetuned") m.begin_finetune();
    import_arrays(m.params_, f);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw_format(std::string("bad conditional model config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw_format(std::string("bad conditional model config: ") + e.what());
  }
}

namespace {

constexpr std::size_t kRunChunk = 16;

struct Batch {
  std::vector<std::size_t> runs;
  std::size_t instances = 0;
};

double mean_loss(const ConditionalModel& m, std::span<const ConditionalInstance> inst,
                 const std::vector<ConditionalModel::Run>& runs, std::size_t threads) {
  const std::size_t chunks = (runs.size() + kRunChunk - 1) / kRunChunk;
  std::vector<double> part(chunks, 0.0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t hi = std::min(runs.size(), (c + 1) * kRunChunk);
    for (std::size_t r = c * kRunChunk; r < hi; ++r) part[c] += m.run_loss(runs[r], inst, nullptr, 1.0);
  });
  double total = 0.0;
  for (double v : part) total += v;
  return total / static_cast<double>(inst.size());
}

// Shared Adam loop with best-dev checkpointing. When keep_start is set the
// initial model competes as epoch 0.
ConditionalModel fit(ConditionalModel model, std::span<const ConditionalInstance> train,
                     std::span<const ConditionalInstance> dev, double lr, std::size_t max_epochs,
                     const ConditionalConfig& cfg, bool keep_start, std::uint64_t stream,
                     ConditionalTrainReport* report) {
  if (cfg.batch_size == 0) throw_invalid("batch size must be positive");
  for (const auto& i : train) {
    if (i.target >= model.vocab_size()) throw_invalid("training target out of range");
  }
  const auto runs = ConditionalModel::group_runs(train);
  const auto dev_inst = dev.empty() ? train : dev;
  const auto dev_runs = ConditionalModel::group_runs(dev_inst);

  auto params = tensor_list(model.params());
  AdamState adam(AdamConfig{lr, 0.9, 0.999, 1e-8, cfg.clip_norm}, params);
  ConditionalModel best = model;
  double best_dev = std::numeric_limits<double>::infinity();
  if (keep_start) best_dev = mean_loss(model, dev_inst, dev_runs, cfg.threads);
  std::size_t since_best = 0;

  std::vector<std::size_t> order(runs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t epoch = 1; epoch <= max_epochs; ++epoch) {
    Rng rng(derive_seed(derive_seed(cfg.seed, stream), epoch));
    rng.shuffle(order);
    std::vector<Batch> batches(1);
    for (auto r : order) {
      if (batches.back().instances >= cfg.batch_size) batches.emplace_back();
      batches.back().runs.push_back(r);
      batches.back().instances += runs[r].members.size();
    }
    double epoch_loss = 0.0;
    for (const auto& batch : batches) {
      const double norm = static_cast<double>(batch.instances);
      const std::size_t chunks = (batch.runs.size() + kRunChunk - 1) / kRunChunk;
      std::vector<ConditionalParams> grads(chunks);
      std::vector<double> losses(chunks, 0.0);
      parallel_for(chunks, cfg.threads, [&](std::size_t c) {
        grads[c] = zeros_like(model.params());
        const std::size_t hi = std::min(batch.runs.size(), (c + 1) * kRunChunk);
        for (std::size_t k = c * kRunChunk; k < hi; ++k)
          losses[c] += model.run_loss(runs[batch.runs[k]], train, &grads[c], 1.0 / norm);
      });
      for (std::size_t c = 1; c < chunks; ++c) add_into(grads[0], grads[c]);
      for (double l : losses) epoch_loss += l;
      auto g = tensor_list(grads[0]);
      adam_update(adam, params, g);
    }
    const double dev_loss = mean_loss(model, dev_inst, dev_runs, cfg.threads);
    if (report) {
      report->train_loss.push_back(epoch_loss / static_cast<double>(train.size()));
      report->dev_loss.push_back(dev_loss);
    }
    if (dev_loss < best_dev) {
      best_dev = dev_loss;
      best = model;
      since_best = 0;
      if (report) report->best_epoch = epoch;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return best;
}

}  // namespace

ConditionalModel train_conditional(std::span<const ConditionalInstance> train,
                                   std::span<const ConditionalInstance> dev,
                                   std::size_t vocab_size, std::vector<std::string> tokens,
                                   const ConditionalConfig& cfg, ConditionalTrainReport* report) {
  if (train.empty()) throw_invalid("train_conditional: no training instances");
  ConditionalModel model(vocab_size, std::move(tokens), cfg.dim, cfg.hidden, cfg.text_mode, cfg.seed);
  return fit(std::move(model), train, dev, cfg.lr, cfg.max_epochs, cfg, false, 1, report);
}

ConditionalModel finetune_with_oot(const ConditionalModel& base,
                                   std::span<const ConditionalInstance> train,
                                   std::span<const ConditionalInstance> dev,
                                   const ConditionalConfig& cfg, ConditionalTrainReport* report) {
  if (train.empty()) throw_invalid("finetune_with_oot: no annotated instances");
  ConditionalModel model = base;
  model.begin_finetune();
  return fit(std::move(model), train, dev, cfg.finetune_lr, cfg.finetune_max_epochs, cfg, true, 2,
             report);
}

}  // namespace scriptcausal
