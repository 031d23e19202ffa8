#include "scriptcausal/text_encoder.hpp"

#include <cmath>

#include "scriptcausal/errors.hpp"
#include "scriptcausal/rng.hpp"

namespace scriptcausal {

std::string_view to_string(TextMode mode) { return mode == TextMode::cnn ? "cnn" : "mean"; }

TextMode parse_text_mode(std::string_view name) {
  if (name == "mean") return TextMode::mean;
  if (name == "cnn") return TextMode::cnn;
  throw_invalid("unknown text encoder mode '" + std::string(name) + "' (expected mean or cnn)");
}

TextEncoderParams TextEncoderParams::zeros(TextMode mode, std::size_t tokens, std::size_t dim) {
  TextEncoderParams p;
  p.mode = mode;
  p.token_embeddings = Tensor::matrix(tokens, dim);
  if (mode == TextMode::cnn) {
    if (dim % 4 != 0 || dim == 0) throw_invalid("cnn text encoder needs a dimension divisible by 4");
    for (std::size_t w = 0; w < kCnnWindows.size(); ++w) {
      p.filters[w] = Tensor::matrix(dim / 4, kCnnWindows[w] * dim);
      p.filter_bias[w] = Tensor::vector(dim / 4);
    }
    p.projection = Tensor::matrix(dim, dim);
  }
  return p;
}

TextEncoderParams TextEncoderParams::random(TextMode mode, std::size_t tokens, std::size_t dim,
                                            Rng& rng) {
  TextEncoderParams p = zeros(mode, tokens, dim);
  init_uniform(p.token_embeddings, 0.1, rng);
  if (mode == TextMode::cnn) {
    for (auto& f : p.filters) init_xavier(f, rng);
    init_xavier(p.projection, rng);
  }
  return p;
}

namespace {

void check_tokens(const TextEncoderParams& p, std::span<const std::uint32_t> tokens) {
  for (auto t : tokens)
    if (t >= p.token_embeddings.rows()) throw_invalid("encode_text: token id out of range");
}

// Concatenated embeddings of tokens[start, start+width), zero beyond the end.
void window_input(const TextEncoderParams& p, std::span<const std::uint32_t> tokens,
                  std::size_t start, std::size_t width, std::vector<double>& out) {
  const std::size_t d = p.dim();
  out.assign(width * d, 0.0);
  for (std::size_t k = 0; k < width && start + k < tokens.size(); ++k) {
    auto e = p.token_embeddings.row(tokens[start + k]);
    std::copy(e.begin(), e.end(), out.begin() + static_cast<std::ptrdiff_t>(k * d));
  }
}

}  // namespace

std::vector<double> encode_text(const TextEncoderParams& p,
                                std::span<const std::uint32_t> tokens, TextCache* cache) {
  check_tokens(p, tokens);
  const std::size_t d = p.dim();
  std::vector<double> v(d, 0.0);
  if (cache) {
    cache->tokens.assign(tokens.begin(), tokens.end());
    cache->pooled.clear();
    cache->argmax.clear();
  }
  if (tokens.empty()) return v;

  if (p.mode == TextMode::mean) {
    for (auto t : tokens) axpy(1.0, p.token_embeddings.row(t), v);
    const double inv = 1.0 / static_cast<double>(tokens.size());
    for (auto& x : v) x *= inv;
    return v;
  }

  const std::size_t f = d / 4;
  std::vector<double> pooled(d), act(f), input;
  std::vector<std::size_t> argmax(d, 0);
  for (std::size_t w = 0; w < kCnnWindows.size(); ++w) {
    const std::size_t width = kCnnWindows[w];
    const std::size_t positions = tokens.size() >= width ? tokens.size() - width + 1 : 1;
    for (std::size_t pos = 0; pos < positions; ++pos) {
      window_input(p, tokens, pos, width, input);
      act.assign(p.filter_bias[w].values.begin(), p.filter_bias[w].values.end());
      matvec_acc(p.filters[w], input, act);
      for (std::size_t j = 0; j < f; ++j) {
        const double a = std::tanh(act[j]);
        if (pos == 0 || a > pooled[w * f + j]) {
          pooled[w * f + j] = a;
          argmax[w * f + j] = pos;
        }
      }
    }
  }
  matvec_acc(p.projection, pooled, v);
  if (cache) {
    cache->pooled = std::move(pooled);
    cache->argmax = std::move(argmax);
  }
  return v;
}

void encode_text_backward(const TextEncoderParams& p, const TextCache& c,
                          std::span<const double> dv, TextEncoderParams& g) {
  const auto& tokens = c.tokens;
  if (tokens.empty()) return;
  const std::size_t d = p.dim();

  if (p.mode == TextMode::mean) {
    const double inv = 1.0 / static_cast<double>(tokens.size());
    for (auto t : tokens) axpy(inv, dv, g.token_embeddings.row(t));
    return;
  }

  const std::size_t f = d / 4;
  outer_acc(g.projection, dv, c.pooled);
  std::vector<double> dpooled(d, 0.0), input;
  matvec_t_acc(p.projection, dv, dpooled);
  for (std::size_t w = 0; w < kCnnWindows.size(); ++w) {
    const std::size_t width = kCnnWindows[w];
    for (std::size_t j = 0; j < f; ++j) {
      const std::size_t unit = w * f + j;
      const double a = c.pooled[unit];
      const double dpre = dpooled[unit] * (1.0 - a * a);
      if (dpre == 0.0) continue;
      const std::size_t pos = c.argmax[unit];
      window_input(p, tokens, pos, width, input);
      axpy(dpre, input, g.filters[w].row(j));
      g.filter_bias[w].values[j] += dpre;
      auto frow = p.filters[w].row(j);
      for (std::size_t k = 0; k < width && pos + k < tokens.size(); ++k)
        axpy(dpre, frow.subspan(k * d, d), g.token_embeddings.row(tokens[pos + k]));
    }
  }
}

}  // namespace scriptcausal
