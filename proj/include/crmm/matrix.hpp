#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "crmm/error.hpp"

namespace crmm {

// Dense row-major matrix of doubles.
//
// Invariants, checked at construction:
//   * data.size() == rows * cols
//   * every entry is finite (no NaN or infinity is ever admitted)
//
// Instances are immutable after construction; all operations build a fresh
// buffer and construct a new matrix from it.  Empty dimensions are legal
// (a rows x 0 matrix participates in products with an empty inner sum).
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(errc::dimension_mismatch,
                  "matrix buffer holds " + std::to_string(data_.size()) +
                      " entries, expected " + std::to_string(rows_ * cols_));
    }
    for (double v : data_) {
      if (!std::isfinite(v)) {
        throw Error(errc::nonfinite_entry, "matrix entry is not finite");
      }
    }
  }

  static DenseMatrix zeros(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols, std::vector<double>(rows * cols, 0.0));
  }

  static DenseMatrix identity(std::size_t n) {
    std::vector<double> buf(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) buf[i * n + i] = 1.0;
    return DenseMatrix(n, n, std::move(buf));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<double>& data() const noexcept { return data_; }

  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Exact product, serial i-k-j loops.  The inner loop runs over contiguous
// rows of b and out, and the summation order is fixed, so results are
// bitwise reproducible across runs.
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(errc::dimension_mismatch,
                "matmul: inner dimensions " + std::to_string(a.cols()) +
                    " and " + std::to_string(b.rows()) + " differ");
  }
  std::vector<double> out(a.rows() * b.cols(), 0.0);
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const double* brow = b.data().data() + k * n;
      double* orow = out.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }
  return DenseMatrix(a.rows(), b.cols(), std::move(out));
}

inline double frobenius_norm(const DenseMatrix& m) {
  double acc = 0.0;
  for (double v : m.data()) acc += v * v;
  return std::sqrt(acc);
}

inline double squared_frobenius_norm(const DenseMatrix& m) {
  double acc = 0.0;
  for (double v : m.data()) acc += v * v;
  return acc;
}

inline DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) {
    throw Error(errc::dimension_mismatch, "subtract: shapes differ");
  }
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a.data()[i] - b.data()[i];
  return DenseMatrix(a.rows(), a.cols(), std::move(out));
}

inline DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) {
    throw Error(errc::dimension_mismatch, "add: shapes differ");
  }
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a.data()[i] + b.data()[i];
  return DenseMatrix(a.rows(), a.cols(), std::move(out));
}

inline DenseMatrix scale(const DenseMatrix& a, double factor) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a.data()[i] * factor;
  return DenseMatrix(a.rows(), a.cols(), std::move(out));
}

// ||a - b||_F without materialising the difference.
inline double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) {
    throw Error(errc::dimension_mismatch, "frobenius_distance: shapes differ");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace crmm
