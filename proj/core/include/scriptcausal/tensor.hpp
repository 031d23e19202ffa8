#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scriptcausal {

class Rng;

// Dense row-major array of doubles. Vectors have one dimension, matrices two.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims);

  static Tensor vector(std::size_t n) { return Tensor({n}); }
  static Tensor matrix(std::size_t rows, std::size_t cols) { return Tensor({rows, cols}); }

  std::size_t size() const { return values.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }

  std::span<double> row(std::size_t r) { return {values.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols(), cols()}; }

  void zero();
  bool all_finite() const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape == b.shape && a.values == b.values;
  }
};

// Product of dims; 1 for an empty shape.
std::size_t shape_size(const std::vector<std::size_t>& dims);

void init_uniform(Tensor& t, double bound, Rng& rng);
// Uniform in +-sqrt(6 / (rows + cols)).
void init_xavier(Tensor& t, Rng& rng);

// y += M x
void matvec_acc(const Tensor& m, std::span<const double> x, std::span<double> y);
// y += M^T x
void matvec_t_acc(const Tensor& m, std::span<const double> x, std::span<double> y);
// M += a b^T
void outer_acc(Tensor& m, std::span<const double> a, std::span<const double> b);
// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

double sigmoid(double x);

}  // namespace scriptcausal
