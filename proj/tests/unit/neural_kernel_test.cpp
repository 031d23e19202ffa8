#include <doctest.h>

#include <cmath>
#include <vector>

#include "scriptcausal/adam.hpp"
#include "scriptcausal/errors.hpp"
#include "scriptcausal/event_lm.hpp"
#include "scriptcausal/gradcheck.hpp"
#include "scriptcausal/gru.hpp"
#include "scriptcausal/loss.hpp"
#include "scriptcausal/rng.hpp"
#include "scriptcausal/tensor.hpp"
#include "scriptcausal/text_encoder.hpp"

using namespace scriptcausal;

namespace {

double sigm(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar GRU cell written out element by element.
std::vector<double> reference_gru(const GruParams& p, const std::vector<double>& x,
                                  const std::vector<double>& h) {
  const std::size_t n = p.hidden_dim(), m = p.input_dim();
  std::vector<double> z(n), r(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double az = p.b_z.values[i], ar = p.b_r.values[i];
    for (std::size_t j = 0; j < m; ++j) {
      az += p.w_z(i, j) * x[j];
      ar += p.w_r(i, j) * x[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      az += p.u_z(i, j) * h[j];
      ar += p.u_r(i, j) * h[j];
    }
    z[i] = sigm(az);
    r[i] = sigm(ar);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double ac = p.b_h.values[i];
    for (std::size_t j = 0; j < m; ++j) ac += p.w_h(i, j) * x[j];
    for (std::size_t j = 0; j < n; ++j) ac += p.u_h(i, j) * r[j] * h[j];
    out[i] = (1.0 - z[i]) * h[i] + z[i] * std::tanh(ac);
  }
  return out;
}

}  // namespace

TEST_CASE("gru step with zero parameters halves the state") {
  const auto p = GruParams::zeros(3, 4);
  const std::vector<double> x{1.0, -2.0, 0.5}, h{0.2, -0.4, 1.0, 3.0};
  const auto out = gru_step(p, x, h);
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(out[i] == doctest::Approx(0.5 * h[i]));

  GruStepCache c;
  gru_step(p, x, std::vector<double>(4, 0.0), c);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(c.z[i] == 0.5);
    CHECK(c.r[i] == 0.5);
    CHECK(c.cand[i] == 0.0);
    CHECK(c.h[i] == 0.0);
  }
}

TEST_CASE("gru step matches a scalar reference") {
  Rng rng(11);
  const auto p = GruParams::random(5, 4, rng);
  std::vector<double> x(5), h(4);
  for (auto& v : x) v = rng.uniform(-1, 1);
  for (auto& v : h) v = rng.uniform(-1, 1);
  const auto got = gru_step(p, x, h);
  const auto want = reference_gru(p, x, h);
  for (std::size_t i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-13));
  CHECK_THROWS_AS(gru_step(p, std::vector<double>(4), h), InvalidArgument);
}

TEST_CASE("encode_sequence of one id is one step from the zero state") {
  Rng rng(3);
  const auto p = GruParams::random(4, 6, rng);
  Tensor emb = Tensor::matrix(5, 4);
  init_uniform(emb, 0.5, rng);
  const std::vector<EventId> ids{2};
  const auto got = encode_sequence(p, emb, ids);
  const auto row = emb.row(2);
  const auto want = gru_step(p, std::vector<double>(row.begin(), row.end()), std::vector<double>(6, 0.0));
  CHECK(got == want);
  CHECK(encode_sequence(p, emb, ids) == got);
}

TEST_CASE("mean text encoder") {
  Rng rng(5);
  const auto p = TextEncoderParams::random(TextMode::mean, 4, 6, rng);
  const std::vector<std::uint32_t> twice{1, 1};
  const auto v = encode_text(p, twice);
  for (std::size_t i = 0; i < 6; ++i) CHECK(v[i] == doctest::Approx(p.token_embeddings(1, i)));
  const auto empty = encode_text(p, std::vector<std::uint32_t>{});
  CHECK(empty == std::vector<double>(6, 0.0));
}

TEST_CASE("cnn text encoder on one token matches a scalar reference") {
  Rng rng(9);
  auto p = TextEncoderParams::random(TextMode::cnn, 5, 8, rng);
  for (auto& b : p.filter_bias) init_uniform(b, 0.3, rng);
  const std::size_t d = 8, f = d / 4;
  const std::uint32_t tok = 3;

  // Every window starts at the single token; the rest of the window is zero padding.
  std::vector<double> pooled(d);
  for (std::size_t w = 0; w < 4; ++w) {
    for (std::size_t j = 0; j < f; ++j) {
      double a = p.filter_bias[w].values[j];
      for (std::size_t k = 0; k < d; ++k) a += p.filters[w](j, k) * p.token_embeddings(tok, k);
      pooled[w * f + j] = std::tanh(a);
    }
  }
  std::vector<double> want(d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) want[i] += p.projection(i, j) * pooled[j];

  const auto got = encode_text(p, std::vector<std::uint32_t>{tok});
  for (std::size_t i = 0; i < d; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-13));
}

TEST_CASE("softmax cross-entropy") {
  const std::vector<double> flat{0.3, 0.3, 0.3, 0.3};
  for (std::size_t t = 0; t < 4; ++t)
    CHECK(softmax_xent(flat, t).loss == doctest::Approx(std::log(4.0)).epsilon(1e-14));

  const std::vector<double> peaked{10.0, 0.0, 0.0};
  const auto r = softmax_xent(peaked, 0);
  CHECK(r.loss == doctest::Approx(std::log1p(2.0 * std::exp(-10.0))).epsilon(1e-12));
  CHECK(r.loss == doctest::Approx(9.08e-5).epsilon(1e-3));
  const double e = std::exp(-10.0), z = 1.0 + 2.0 * e;
  CHECK(r.grad[0] == doctest::Approx(1.0 / z - 1.0));
  CHECK(r.grad[1] == doctest::Approx(e / z));
  CHECK_THROWS_AS(softmax_xent(peaked, 3), InvalidArgument);

  const std::vector<double> huge{1000.0, 999.0};
  const auto s = softmax(huge);
  CHECK(std::isfinite(s[0]));
  CHECK(s[0] + s[1] == doctest::Approx(1.0));
}

TEST_CASE("adam with a zero gradient leaves parameters unchanged") {
  Tensor w({3});
  w.values = {0.5, -1.0, 2.0};
  Tensor g({3});
  std::vector<Tensor*> ps{&w}, gs{&g};
  AdamState st(AdamConfig{}, ps);
  adam_update(st, ps, gs);
  CHECK(w.values == std::vector<double>{0.5, -1.0, 2.0});
  CHECK(st.step == 1);
}

TEST_CASE("adam clips the global norm before the moments") {
  Tensor w1({2}), w2({2});
  Tensor g1({2}), g2({2});
  g1.values = {12.0, 0.0};
  g2.values = {0.0, 16.0};  // global norm 20
  CHECK(global_norm(std::vector<Tensor*>{&g1, &g2}) == doctest::Approx(20.0));

  AdamConfig clipped;
  clipped.clip_norm = 10.0;
  std::vector<Tensor*> p_a{&w1, &w2}, g_a{&g1, &g2};
  AdamState a(clipped, p_a);
  adam_update(a, p_a, g_a);

  Tensor v1({2}), v2({2}), h1({2}), h2({2});
  h1.values = {6.0, 0.0};
  h2.values = {0.0, 8.0};
  AdamConfig unclipped;
  unclipped.clip_norm = 0.0;
  std::vector<Tensor*> p_b{&v1, &v2}, g_b{&h1, &h2};
  AdamState b(unclipped, p_b);
  adam_update(b, p_b, g_b);

  CHECK(a.m[0].values == b.m[0].values);
  CHECK(a.m[1].values == b.m[1].values);
  CHECK(a.v[1].values == b.v[1].values);
  CHECK(w1.values == v1.values);
  CHECK(w2.values == v2.values);
}

TEST_CASE("first adam step moves by the learning rate") {
  Tensor w({1}), g({1});
  w.values = {0.25};
  g.values = {1.0};
  AdamConfig cfg;
  cfg.lr = 0.001;
  std::vector<Tensor*> ps{&w}, gs{&g};
  AdamState st(cfg, ps);
  adam_update(st, ps, gs);
  // Bias-corrected moments are exactly g and g^2 after one step.
  const double m_hat = (1 - cfg.beta1) * 1.0 / (1 - cfg.beta1);
  const double v_hat = (1 - cfg.beta2) * 1.0 / (1 - cfg.beta2);
  const double expected = 0.25 - cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  CHECK(w.values[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(0.25 - w.values[0] == doctest::Approx(0.001).epsilon(1e-6));
}

TEST_CASE("adam rejects a non-finite gradient without touching parameters") {
  Tensor w({2}), g({2});
  w.values = {1.0, 2.0};
  g.values = {0.5, std::nan("")};
  std::vector<Tensor*> ps{&w}, gs{&g};
  AdamState st(AdamConfig{}, ps);
  CHECK_THROWS_AS(adam_update(st, ps, gs), NumericalError);
  CHECK(w.values == std::vector<double>{1.0, 2.0});
}

TEST_CASE("finite differences on a linear loss and a planted fault") {
  Tensor w({5}), x({5});
  w.values = {0.1, -0.3, 0.7, 1.5, -2.0};
  x.values = {2.0, 1.0, -1.0, 0.5, 3.0};
  auto loss = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += w.values[i] * x.values[i];
    return s;
  };
  Rng rng(1);
  const std::vector<ParamSlot> exact{{"w", &w, &x}};
  CHECK(finite_diff_check(loss, exact, 1e-5, 100, rng).max_rel_error <= 1e-9);

  Tensor doubled = x;
  for (auto& v : doubled.values) v *= 2.0;
  const std::vector<ParamSlot> wrong{{"w", &w, &doubled}};
  const auto r = finite_diff_check(loss, wrong, 1e-5, 100, rng);
  CHECK(r.max_rel_error == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.worst_param == "w");
}

TEST_CASE("event LM memorizes a repeated two-event chain") {
  const std::vector<std::vector<EventId>> chains(32, {3, 4});
  EventLmConfig cfg;
  cfg.input_dim = 8;
  cfg.hidden = 16;
  cfg.dropout = 0.0;
  cfg.lr = 0.02;
  cfg.batch_size = 8;
  cfg.max_epochs = 40;
  cfg.patience = 40;
  const auto lm = train_event_lm(chains, chains, 5, cfg);
  const std::vector<EventId> hist{kStartId, 3};
  CHECK(lm.next_distribution(hist)[4] >= 0.9);
}

TEST_CASE("event LM scores form a distribution") {
  const EventLm lm(7, 4, 6, 0.1, 21);
  const std::vector<EventId> hist{kStartId, 4, 5, 3};
  const auto p = lm.next_distribution(hist);
  double s = 0.0;
  for (double v : p) {
    CHECK(v >= 0.0);
    s += v;
  }
  CHECK(std::abs(s - 1.0) <= 1e-12);

  const std::vector<EventId> ctx{4, 5, 3};
  const auto scores = lm.chain_scores(ctx);
  double z = 0.0;
  for (double v : scores) z += std::exp(v);
  CHECK(std::abs(z - 1.0) <= 1e-12);
  CHECK(lm.chain_score(ctx, 6) == scores[6]);
  CHECK_THROWS_AS(lm.next_distribution(std::vector<EventId>{}), InvalidArgument);
}

TEST_CASE("event LM argmax is invariant to a shared logit shift") {
  EventLm lm(6, 4, 5, 0.0, 8);
  const std::vector<EventId> ctx{3, 4};
  const auto before = lm.chain_scores(ctx);
  for (auto& b : lm.params().out_b.values) b += 2.5;
  const auto after = lm.chain_scores(ctx);
  auto argmax = [](const std::vector<double>& v) {
    return std::max_element(v.begin(), v.end()) - v.begin();
  };
  CHECK(argmax(before) == argmax(after));
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(after[i] == doctest::Approx(before[i]));
}

TEST_CASE("event LM predicts the memorized continuation") {
  const std::vector<std::vector<EventId>> chains(32, {3, 4, 5});
  EventLmConfig cfg;
  cfg.input_dim = 8;
  cfg.hidden = 16;
  cfg.dropout = 0.0;
  cfg.lr = 0.02;
  cfg.batch_size = 8;
  cfg.max_epochs = 40;
  cfg.patience = 40;
  const auto lm = train_event_lm(chains, chains, 6, cfg);
  const std::vector<EventId> ctx{3, 4};
  const auto scores = lm.chain_scores(ctx);
  CHECK(std::max_element(scores.begin(), scores.end()) - scores.begin() == 5);
}
