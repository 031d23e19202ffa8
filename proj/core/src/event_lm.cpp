#include "scriptcausal/event_lm.hpp"

#include <cmath>
#include <limits>
#include <json.hpp>

#include "scriptcausal/adam.hpp"
#include "scriptcausal/errors.hpp"
#include "scriptcausal/loss.hpp"
#include "scriptcausal/parallel.hpp"
#include "scriptcausal/params.hpp"
#include "scriptcausal/rng.hpp"

namespace scriptcausal {

namespace {

constexpr std::size_t kChunk = 8;

std::vector<double> dropout_mask(Rng& rng, std::size_t n, double p) {
  std::vector<double> m(n, 1.0);
  if (p <= 0.0) return m;
  const double keep = 1.0 / (1.0 - p);
  for (auto& v : m) v = rng.uniform() < p ? 0.0 : keep;
  return m;
}

}  // namespace

EventLm::EventLm(std::size_t vocab_size, std::size_t input_dim, std::size_t hidden,
                 double dropout, std::uint64_t seed)
    : dropout_(dropout) {
  if (vocab_size <= kNumSpecialIds || input_dim == 0 || hidden == 0)
    throw_invalid("event LM needs a non-empty vocabulary and positive dimensions");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw_invalid("dropout must be in [0, 1)");
  Rng rng(seed);
  params_.embeddings = Tensor::matrix(vocab_size, input_dim);
  init_uniform(params_.embeddings, 0.1, rng);
  params_.layer1 = GruParams::random(input_dim, hidden, rng);
  params_.layer2 = GruParams::random(hidden, hidden, rng);
  params_.out_w = Tensor::matrix(vocab_size, hidden);
  init_xavier(params_.out_w, rng);
  params_.out_b = Tensor::vector(vocab_size);
}

std::vector<EventId> frame_chain(std::span<const EventId> chain) {
  std::vector<EventId> out;
  out.reserve(chain.size() + 2);
  out.push_back(kStartId);
  out.insert(out.end(), chain.begin(), chain.end());
  out.push_back(kEndId);
  return out;
}

std::vector<double> EventLm::next_distribution(std::span<const EventId> history) const {
  if (history.empty()) throw_invalid("LM history must contain at least <s>");
  const auto& p = params_;
  std::vector<double> h1(p.layer1.hidden_dim(), 0.0), h2(p.layer2.hidden_dim(), 0.0);
  for (EventId id : history) {
    if (id >= vocab_size()) throw_invalid("LM history id out of range");
    h1 = gru_step(p.layer1, p.embeddings.row(id), h1);
    h2 = gru_step(p.layer2, h1, h2);
  }
  std::vector<double> logits = p.out_b.values;
  matvec_acc(p.out_w, h2, logits);
  softmax_inplace(logits);
  return logits;
}

std::vector<double> EventLm::chain_scores(std::span<const EventId> context) const {
  std::vector<EventId> hist;
  hist.push_back(kStartId);
  hist.insert(hist.end(), context.begin(), context.end());
  auto dist = next_distribution(hist);
  for (auto& v : dist) v = std::log(v);
  return dist;
}

double EventLm::chain_score(std::span<const EventId> context, EventId candidate) const {
  if (candidate >= vocab_size()) throw_invalid("LM candidate id out of range");
  return chain_scores(context)[candidate];
}

double EventLm::sequence_loss(std::span<const EventId> seq, EventLmParams* grad,
                              std::uint64_t mask_seed, double scale) const {
  const auto& p = params_;
  const std::size_t steps = seq.size() - 1;
  const std::size_t din = p.embeddings.cols(), hid = p.layer2.hidden_dim();
  const bool drop = mask_seed != 0 && dropout_ > 0.0;
  Rng rng(mask_seed);

  std::vector<std::vector<double>> in_masks, out_masks, x(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    if (seq[t] >= vocab_size() || seq[t + 1] >= vocab_size()) throw_invalid("LM sequence id out of range");
    auto e = p.embeddings.row(seq[t]);
    x[t].assign(e.begin(), e.end());
    if (drop) {
      in_masks.push_back(dropout_mask(rng, din, dropout_));
      out_masks.push_back(dropout_mask(rng, hid, dropout_));
      for (std::size_t i = 0; i < din; ++i) x[t][i] *= in_masks[t][i];
    }
  }
  auto c1 = gru_forward(p.layer1, x);
  std::vector<std::vector<double>> x2(steps);
  for (std::size_t t = 0; t < steps; ++t) x2[t] = c1[t].h;
  auto c2 = gru_forward(p.layer2, x2);

  double total = 0.0;
  std::vector<std::vector<double>> dh2(steps, std::vector<double>(hid, 0.0));
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<double> y = c2[t].h;
    if (drop)
      for (std::size_t i = 0; i < hid; ++i) y[i] *= out_masks[t][i];
    std::vector<double> logits = p.out_b.values;
    matvec_acc(p.out_w, y, logits);
    auto xent = softmax_xent(logits, seq[t + 1]);
    total += xent.loss;
    if (!grad) continue;
    for (auto& g : xent.grad) g *= scale;
    outer_acc(grad->out_w, xent.grad, y);
    axpy(1.0, xent.grad, grad->out_b.values);
    matvec_t_acc(p.out_w, xent.grad, dh2[t]);
    if (drop)
      for (std::size_t i = 0; i < hid; ++i) dh2[t][i] *= out_masks[t][i];
  }
  if (grad) {
    auto dx2 = gru_backward(p.layer2, c2, dh2, grad->layer2);
    auto dx1 = gru_backward(p.layer1, c1, dx2, grad->layer1);
    for (std::size_t t = 0; t < steps; ++t) {
      if (drop)
        for (std::size_t i = 0; i < din; ++i) dx1[t][i] *= in_masks[t][i];
      axpy(1.0, dx1[t], grad->embeddings.row(seq[t]));
    }
  }
  return total;
}

double EventLm::loss(std::span<const std::vector<EventId>> framed, EventLmParams* grad,
                     std::uint64_t dropout_seed, double normalizer) const {
  if (normalizer <= 0.0) {
    for (const auto& s : framed) normalizer += static_cast<double>(s.size() - 1);
  }
  if (normalizer <= 0.0) throw_invalid("LM loss over an empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < framed.size(); ++i) {
    if (framed[i].size() < 2) throw_invalid("framed LM sequence needs at least two ids");
    const std::uint64_t mask_seed = dropout_seed == 0 ? 0 : derive_seed(dropout_seed, i) | 1;
    total += sequence_loss(framed[i], grad, mask_seed, 1.0 / normalizer);
  }
  return total / normalizer;
}

ModelFile EventLm::to_file() const {
  ModelFile f;
  f.kind = "event-lm";
  nlohmann::ordered_json cfg;
  cfg["vocab_size"] = vocab_size();
  cfg["input_dim"] = params_.embeddings.cols();
  cfg["hidden"] = params_.layer2.hidden_dim();
  cfg["dropout"] = dropout_;
  f.config_json = cfg.dump();
  auto copy = params_;
  f.arrays = export_arrays(copy);
  return f;
}

EventLm EventLm::from_file(const ModelFile& f) {
  if (f.kind != "event-lm") throw_format("expected an event-lm model, found '" + f.kind + "'");
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(f.config_json);
    EventLm lm(cfg.at("vocab_size").get<std::size_t>(), cfg.at("input_dim").get<std::size_t>(),
               cfg.at("hidden").get<std::size_t>(), cfg.at("dropout").get<double>(), 1);
    import_arrays(lm.params_, f);
    return lm;
  } catch (const nlohmann::json::exception& e) {
    throw_format(std::string("bad event-lm config: ") + e.what());
  }
}

EventLm train_event_lm(std::span<const std::vector<EventId>> train,
                       std::span<const std::vector<EventId>> dev, std::size_t vocab_size,
                       const EventLmConfig& cfg, LmTrainReport* report) {
  if (train.empty()) throw_invalid("train_event_lm: empty training corpus");
  if (cfg.batch_size == 0 || cfg.max_epochs == 0) throw_invalid("batch size and epochs must be positive");
  std::vector<std::vector<EventId>> framed, framed_dev;
  for (const auto& c : train) framed.push_back(frame_chain(c));
  for (const auto& c : dev) framed_dev.push_back(frame_chain(c));
  const auto& dev_set = framed_dev.empty() ? framed : framed_dev;

  EventLm lm(vocab_size, cfg.input_dim, cfg.hidden, cfg.dropout, cfg.seed);
  auto params = tensor_list(lm.params());
  AdamState adam(AdamConfig{cfg.lr, 0.9, 0.999, 1e-8, cfg.clip_norm}, params);

  EventLm best = lm;
  double best_dev = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  std::vector<std::size_t> order(framed.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(cfg.seed, 2 * epoch));
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0, epoch_tokens = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), b + cfg.batch_size);
      std::vector<std::vector<EventId>> batch;
      double tokens = 0.0;
      for (std::size_t i = b; i < end; ++i) {
        batch.push_back(framed[order[i]]);
        tokens += static_cast<double>(batch.back().size() - 1);
      }
      const std::uint64_t drop_seed =
          derive_seed(derive_seed(cfg.seed, 2 * epoch + 1), batch_index) | 1;
      const std::size_t chunks = (batch.size() + kChunk - 1) / kChunk;
      std::vector<EventLmParams> grads(chunks);
      std::vector<double> losses(chunks);
      parallel_for(chunks, cfg.threads, [&](std::size_t c) {
        grads[c] = zeros_like(lm.params());
        const std::size_t lo = c * kChunk, hi = std::min(batch.size(), lo + kChunk);
        std::span<const std::vector<EventId>> part(batch.data() + lo, hi - lo);
        losses[c] = lm.loss(part, &grads[c], derive_seed(drop_seed, c), tokens);
      });
      for (std::size_t c = 1; c < chunks; ++c) add_into(grads[0], grads[c]);
      for (double l : losses) epoch_loss += l * tokens;
      epoch_tokens += tokens;
      auto g = tensor_list(grads[0]);
      adam_update(adam, params, g);
    }
    const double dev_loss = lm.loss(dev_set, nullptr, 0);
    if (report) {
      report->train_loss.push_back(epoch_loss / epoch_tokens);
      report->dev_loss.push_back(dev_loss);
    }
    if (dev_loss < best_dev) {
      best_dev = dev_loss;
      best = lm;
      since_best = 0;
      if (report) report->best_epoch = epoch;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return best;
}

}  // namespace scriptcausal
