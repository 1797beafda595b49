#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "brainaug/rng.hpp"

namespace brainaug {

using Vector = std::vector<double>;

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  void fill(double v);

  // Glorot/Xavier uniform in +-sqrt(6 / (fan_in + fan_out)).
  void init_xavier(SeededRng& rng);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y += W x
void gemv_acc(const DenseMatrix& w, std::span<const double> x, std::span<double> y);
// dx += W^T dy
void gemv_t_acc(const DenseMatrix& w, std::span<const double> dy, std::span<double> dx);
// dW += dy x^T
void outer_acc(DenseMatrix& dw, std::span<const double> dy, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace brainaug
