#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scriptcausal/tensor.hpp"

namespace scriptcausal {

class Rng;

enum class TextMode { mean, cnn };

std::string_view to_string(TextMode mode);
// Throws InvalidArgument for anything but "mean" or "cnn".
TextMode parse_text_mode(std::string_view name);

inline constexpr std::array<std::size_t, 4> kCnnWindows{2, 3, 4, 5};

// Token embeddings plus, in cnn mode, one filter bank per window width
// (dim/4 filters each) and a dim x dim projection of the pooled features.
struct TextEncoderParams {
  TextMode mode = TextMode::mean;
  Tensor token_embeddings;  // tokens x dim
  std::array<Tensor, 4> filters;  // (dim/4) x (width*dim)
  std::array<Tensor, 4> filter_bias;
  Tensor projection;  // dim x dim

  static TextEncoderParams zeros(TextMode mode, std::size_t tokens, std::size_t dim);
  static TextEncoderParams random(TextMode mode, std::size_t tokens, std::size_t dim, Rng& rng);

  std::size_t dim() const { return token_embeddings.cols(); }

  template <class F>
  void visit(const std::string& prefix, F&& f) {
    f(prefix + "token_embeddings", token_embeddings);
    if (mode != TextMode::cnn) return;
    for (std::size_t w = 0; w < kCnnWindows.size(); ++w) {
      const std::string n = std::to_string(kCnnWindows[w]);
      f(prefix + "filter" + n, filters[w]);
      f(prefix + "filter_bias" + n, filter_bias[w]);
    }
    f(prefix + "projection", projection);
  }
};

struct TextCache {
  std::vector<std::uint32_t> tokens;
  std::vector<double> pooled;  // cnn: concatenated max-pooled activations
  std::vector<std::size_t> argmax;  // cnn: winning start position per pooled unit
};

// Empty token lists encode to the zero vector in both modes.
std::vector<double> encode_text(const TextEncoderParams& p,
                                std::span<const std::uint32_t> tokens,
                                TextCache* cache = nullptr);
void encode_text_backward(const TextEncoderParams& p, const TextCache& cache,
                          std::span<const double> dv, TextEncoderParams& grad);

}  // namespace scriptcausal
