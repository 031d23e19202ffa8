#include "scriptcausal/tensor.hpp"

#include <cmath>

#include "scriptcausal/rng.hpp"

namespace scriptcausal {

std::size_t shape_size(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

Tensor::Tensor(std::vector<std::size_t> dims)
    : shape(std::move(dims)), values(shape_size(shape), 0.0) {}

void Tensor::zero() { std::fill(values.begin(), values.end(), 0.0); }

bool Tensor::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

void init_uniform(Tensor& t, double bound, Rng& rng) {
  for (auto& v : t.values) v = rng.uniform(-bound, bound);
}

void init_xavier(Tensor& t, Rng& rng) {
  const double fan = static_cast<double>(t.rows() + t.cols());
  init_uniform(t, std::sqrt(6.0 / fan), rng);
}

void matvec_acc(const Tensor& m, std::span<const double> x, std::span<double> y) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const double* a = m.values.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += row[c] * x[c];
    y[r] += s;
  }
}

void matvec_t_acc(const Tensor& m, std::span<const double> x, std::span<double> y) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const double* a = m.values.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    const double* row = a + r * cols;
    for (std::size_t c = 0; c < cols; ++c) y[c] += row[c] * xr;
  }
}

void outer_acc(Tensor& m, std::span<const double> a, std::span<const double> b) {
  const std::size_t rows = m.rows(), cols = m.cols();
  double* p = m.values.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double ar = a[r];
    if (ar == 0.0) continue;
    double* row = p + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += ar * b[c];
  }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace scriptcausal
