#include "scriptcausal/gru.hpp"

#include <cmath>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/rng.hpp"

namespace scriptcausal {

GruParams GruParams::zeros(std::size_t input, std::size_t hidden) {
  GruParams p;
  for (Tensor* w : {&p.w_z, &p.w_r, &p.w_h}) *w = Tensor::matrix(hidden, input);
  for (Tensor* u : {&p.u_z, &p.u_r, &p.u_h}) *u = Tensor::matrix(hidden, hidden);
  for (Tensor* b : {&p.b_z, &p.b_r, &p.b_h}) *b = Tensor::vector(hidden);
  return p;
}

GruParams GruParams::random(std::size_t input, std::size_t hidden, Rng& rng) {
  GruParams p = zeros(input, hidden);
  for (Tensor* m : {&p.w_z, &p.w_r, &p.w_h, &p.u_z, &p.u_r, &p.u_h}) init_xavier(*m, rng);
  return p;
}

void gru_step(const GruParams& p, std::span<const double> x,
              std::span<const double> h_prev, GruStepCache& c) {
  const std::size_t n = p.hidden_dim();
  if (x.size() != p.input_dim() || h_prev.size() != n)
    throw_invalid("gru_step: dimension mismatch");
  c.x.assign(x.begin(), x.end());
  c.h_prev.assign(h_prev.begin(), h_prev.end());
  c.z.assign(p.b_z.values.begin(), p.b_z.values.end());
  c.r.assign(p.b_r.values.begin(), p.b_r.values.end());
  c.cand.assign(p.b_h.values.begin(), p.b_h.values.end());
  matvec_acc(p.w_z, x, c.z);
  matvec_acc(p.u_z, h_prev, c.z);
  matvec_acc(p.w_r, x, c.r);
  matvec_acc(p.u_r, h_prev, c.r);
  std::vector<double> rh(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.z[i] = sigmoid(c.z[i]);
    c.r[i] = sigmoid(c.r[i]);
    rh[i] = c.r[i] * h_prev[i];
  }
  matvec_acc(p.w_h, x, c.cand);
  matvec_acc(p.u_h, rh, c.cand);
  c.h.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.cand[i] = std::tanh(c.cand[i]);
    c.h[i] = (1.0 - c.z[i]) * h_prev[i] + c.z[i] * c.cand[i];
  }
}

std::vector<double> gru_step(const GruParams& p, std::span<const double> x,
                             std::span<const double> h_prev) {
  GruStepCache c;
  gru_step(p, x, h_prev, c);
  return std::move(c.h);
}

void gru_step_backward(const GruParams& p, const GruStepCache& c,
                       std::span<const double> dh, GruParams& g,
                       std::span<double> dx, std::span<double> dh_prev) {
  const std::size_t n = p.hidden_dim();
  std::vector<double> da_z(n), da_r(n), da_h(n), rh(n), drh(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double dz = dh[i] * (c.cand[i] - c.h_prev[i]);
    const double dcand = dh[i] * c.z[i];
    da_z[i] = dz * c.z[i] * (1.0 - c.z[i]);
    da_h[i] = dcand * (1.0 - c.cand[i] * c.cand[i]);
    rh[i] = c.r[i] * c.h_prev[i];
  }
  matvec_t_acc(p.u_h, da_h, drh);
  for (std::size_t i = 0; i < n; ++i) da_r[i] = drh[i] * c.h_prev[i] * c.r[i] * (1.0 - c.r[i]);

  outer_acc(g.w_z, da_z, c.x);
  outer_acc(g.w_r, da_r, c.x);
  outer_acc(g.w_h, da_h, c.x);
  outer_acc(g.u_z, da_z, c.h_prev);
  outer_acc(g.u_r, da_r, c.h_prev);
  outer_acc(g.u_h, da_h, rh);
  axpy(1.0, da_z, g.b_z.values);
  axpy(1.0, da_r, g.b_r.values);
  axpy(1.0, da_h, g.b_h.values);

  for (std::size_t i = 0; i < n; ++i) dh_prev[i] = dh[i] * (1.0 - c.z[i]) + drh[i] * c.r[i];
  matvec_t_acc(p.u_z, da_z, dh_prev);
  matvec_t_acc(p.u_r, da_r, dh_prev);
  if (!dx.empty()) {
    std::fill(dx.begin(), dx.end(), 0.0);
    matvec_t_acc(p.w_z, da_z, dx);
    matvec_t_acc(p.w_r, da_r, dx);
    matvec_t_acc(p.w_h, da_h, dx);
  }
}

std::vector<GruStepCache> gru_forward(const GruParams& p,
                                      const std::vector<std::vector<double>>& inputs) {
  std::vector<GruStepCache> steps(inputs.size());
  std::vector<double> h(p.hidden_dim(), 0.0);
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    gru_step(p, inputs[t], h, steps[t]);
    h = steps[t].h;
  }
  return steps;
}

std::vector<std::vector<double>> gru_backward(const GruParams& p,
                                              const std::vector<GruStepCache>& steps,
                                              const std::vector<std::vector<double>>& dh_out,
                                              GruParams& grad) {
  const std::size_t n = p.hidden_dim();
  std::vector<std::vector<double>> dxs(steps.size(), std::vector<double>(p.input_dim()));
  std::vector<double> carry(n, 0.0), dh(n), dprev(n);
  for (std::size_t t = steps.size(); t-- > 0;) {
    for (std::size_t i = 0; i < n; ++i) dh[i] = carry[i] + dh_out[t][i];
    gru_step_backward(p, steps[t], dh, grad, dxs[t], dprev);
    carry.swap(dprev);
  }
  return dxs;
}

std::vector<double> encode_sequence(const GruParams& p, const Tensor& embeddings,
                                    std::span<const EventId> ids) {
  if (ids.empty()) throw_invalid("encode_sequence: empty sequence");
  std::vector<double> h(p.hidden_dim(), 0.0);
  for (EventId id : ids) {
    if (id >= embeddings.rows()) throw_invalid("encode_sequence: id out of range");
    h = gru_step(p, embeddings.row(id), h);
  }
  return h;
}

}  // namespace scriptcausal
