#include "brainaug/dense.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace brainaug {

void DenseMatrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void DenseMatrix::init_xavier(SeededRng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows_ + cols_));
  for (double& v : data_) v = rng.uniform(-limit, limit);
}

void gemv_acc(const DenseMatrix& w, std::span<const double> x, std::span<double> y) {
  assert(x.size() == w.cols() && y.size() == w.rows());
  const std::size_t cols = w.cols();
  const double* p = w.flat().data();
  for (std::size_t r = 0; r < w.rows(); ++r, p += cols) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += p[c] * x[c];
    y[r] += acc;
  }
}

void gemv_t_acc(const DenseMatrix& w, std::span<const double> dy, std::span<double> dx) {
  assert(dy.size() == w.rows() && dx.size() == w.cols());
  const std::size_t cols = w.cols();
  const double* p = w.flat().data();
  for (std::size_t r = 0; r < w.rows(); ++r, p += cols) {
    const double g = dy[r];
    if (g == 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) dx[c] += p[c] * g;
  }
}

void outer_acc(DenseMatrix& dw, std::span<const double> dy, std::span<const double> x) {
  assert(dy.size() == dw.rows() && x.size() == dw.cols());
  const std::size_t cols = dw.cols();
  double* p = dw.flat().data();
  for (std::size_t r = 0; r < dw.rows(); ++r, p += cols) {
    const double g = dy[r];
    if (g == 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) p[c] += g * x[c];
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace brainaug
