#include "scriptcausal/model_checks.hpp"

#include <string>

#include "scriptcausal/event_lm.hpp"
#include "scriptcausal/rng.hpp"

namespace scriptcausal {

namespace {

template <class P>
std::vector<ParamSlot> slots(P& value, P& grad) {
  std::vector<Tensor*> grads;
  grad.visit("", [&](const std::string&, Tensor& t) { grads.push_back(&t); });
  std::vector<ParamSlot> out;
  std::size_t i = 0;
  value.visit("", [&](const std::string& name, Tensor& t) { out.push_back({name, &t, grads[i++]}); });
  return out;
}

template <class P>
void fill(P& p, double scale, Rng& rng) {
  p.visit("", [&](const std::string&, Tensor& t) {
    if (scale > 0) init_uniform(t, scale, rng);
    else t.zero();
  });
}

}  // namespace

std::vector<ConditionalInstance> random_instances(std::size_t n, std::size_t vocab,
                                                  std::size_t tokens, Rng& rng) {
  std::vector<ConditionalInstance> out(n);
  for (auto& inst : out) {
    inst.target = static_cast<EventId>(rng.below(vocab));
    inst.context.prev = static_cast<EventId>(rng.below(vocab));
    for (auto h = rng.below(kHistoryWindow + 1); h > 0; --h)
      inst.context.history.push_back(static_cast<EventId>(rng.below(vocab)));
    for (auto t = rng.below(7); t > 0; --t)
      inst.context.text.push_back(static_cast<std::uint32_t>(rng.below(tokens)));
    for (auto t = rng.below(3); t > 0; --t)
      inst.context.oot.push_back(static_cast<EventId>(rng.below(vocab)));
  }
  return out;
}

GradCheckResult check_event_lm_gradients(const GradCheckSetup& s) {
  Rng rng(derive_seed(s.seed, 1));
  EventLm lm(s.vocab, s.dim, s.hidden, 0.1, derive_seed(s.seed, 2));
  fill(lm.params(), s.param_scale, rng);
  std::vector<std::vector<EventId>> batch;
  for (std::size_t i = 0; i < s.batch; ++i) {
    std::vector<EventId> chain;
    for (auto n = 1 + rng.below(7); n > 0; --n)
      chain.push_back(static_cast<EventId>(kNumSpecialIds + rng.below(s.vocab - kNumSpecialIds)));
    batch.push_back(frame_chain(chain));
  }
  const auto dropout_seed = derive_seed(s.seed, 3);
  EventLm holder = lm;
  fill(holder.params(), 0.0, rng);
  lm.loss(batch, &holder.params(), dropout_seed, 1.0);
  const auto ps = slots(lm.params(), holder.params());
  return finite_diff_check([&] { return lm.loss(batch, nullptr, dropout_seed, 1.0); }, ps, s.eps,
                           s.per_tensor, rng);
}

GradCheckResult check_conditional_gradients(const GradCheckSetup& s, TextMode mode, bool oot) {
  Rng rng(derive_seed(s.seed, 4));
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < s.tokens; ++i) tokens.push_back("t" + std::to_string(i));
  ConditionalModel model(s.vocab, tokens, s.dim, s.hidden, mode, derive_seed(s.seed, 5));
  if (oot) model.begin_finetune();
  fill(model.params(), s.param_scale, rng);
  const auto batch = random_instances(s.batch, s.vocab, s.tokens, rng);
  ConditionalModel holder = model;
  fill(holder.params(), 0.0, rng);
  model.loss(batch, &holder.params(), 1.0);
  const auto ps = slots(model.params(), holder.params());
  return finite_diff_check([&] { return model.loss(batch, nullptr, 1.0); }, ps, s.eps,
                           s.per_tensor, rng);
}

}  // namespace scriptcausal
