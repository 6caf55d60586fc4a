#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "crmm/error.hpp"
#include "crmm/matrix.hpp"

namespace crmm {

enum class BlockAxis { columns, rows };

// Non-owning view of a matrix split into K equal blocks along one axis:
// column blocks of the left factor (L x tau each) or row blocks of the right
// factor (tau x M each).  Blocks never copy data unless materialized.
//
// The partitioned dimension must be an exact multiple of the block count.
class BlockPartition {
 public:
  BlockPartition(const DenseMatrix& m, std::size_t blocks, BlockAxis axis)
      : m_(&m), blocks_(blocks), axis_(axis) {
    const std::size_t dim = axis == BlockAxis::columns ? m.cols() : m.rows();
    if (blocks == 0 || dim % blocks != 0) {
      throw Error(errc::indivisible,
                  "block count " + std::to_string(blocks) +
                      " does not divide dimension " + std::to_string(dim));
    }
    width_ = dim / blocks;
  }

  const DenseMatrix& matrix() const noexcept { return *m_; }
  std::size_t block_count() const noexcept { return blocks_; }
  std::size_t block_width() const noexcept { return width_; }
  BlockAxis axis() const noexcept { return axis_; }

  // Shape of one block: L x tau for column blocks, tau x M for row blocks.
  std::size_t block_rows() const noexcept {
    return axis_ == BlockAxis::columns ? m_->rows() : width_;
  }
  std::size_t block_cols() const noexcept {
    return axis_ == BlockAxis::columns ? width_ : m_->cols();
  }

  double block_entry(std::size_t block, std::size_t i, std::size_t j) const {
    if (axis_ == BlockAxis::columns) return (*m_)(i, block * width_ + j);
    return (*m_)(block * width_ + i, j);
  }

  double block_norm(std::size_t block) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < block_rows(); ++i)
      for (std::size_t j = 0; j < block_cols(); ++j) {
        const double v = block_entry(block, i, j);
        acc += v * v;
      }
    return std::sqrt(acc);
  }

  // Copy of one block, optionally rescaled.
  DenseMatrix materialize_block(std::size_t block, double factor = 1.0) const {
    std::vector<double> buf(block_rows() * block_cols());
    std::size_t at = 0;
    for (std::size_t i = 0; i < block_rows(); ++i)
      for (std::size_t j = 0; j < block_cols(); ++j)
        buf[at++] = factor * block_entry(block, i, j);
    return DenseMatrix(block_rows(), block_cols(), std::move(buf));
  }

 private:
  const DenseMatrix* m_;
  std::size_t blocks_;
  std::size_t width_;
  BlockAxis axis_;
};

inline void require_compatible(const BlockPartition& a, const BlockPartition& b) {
  if (a.axis() != BlockAxis::columns || b.axis() != BlockAxis::rows) {
    throw Error(errc::dimension_mismatch,
                "expected column blocks of the left factor and row blocks of "
                "the right factor");
  }
  if (a.block_count() != b.block_count() || a.block_width() != b.block_width() ||
      a.matrix().cols() != b.matrix().rows()) {
    throw Error(errc::dimension_mismatch,
                "partitions do not describe a conformable product");
  }
}

// Sum of per-block outer products, sum_l A_l B_l.  Equals matmul(A, B); kept
// as an independent route so the two can cross-check each other in tests.
inline DenseMatrix block_outer_sum(const BlockPartition& a, const BlockPartition& b) {
  require_compatible(a, b);
  const std::size_t rows = a.matrix().rows();
  const std::size_t cols = b.matrix().cols();
  const std::size_t tau = a.block_width();
  std::vector<double> out(rows * cols, 0.0);
  for (std::size_t l = 0; l < a.block_count(); ++l) {
    for (std::size_t i = 0; i < rows; ++i) {
      double* orow = out.data() + i * cols;
      for (std::size_t k = 0; k < tau; ++k) {
        const double aik = a.block_entry(l, i, k);
        for (std::size_t j = 0; j < cols; ++j)
          orow[j] += aik * b.block_entry(l, k, j);
      }
    }
  }
  return DenseMatrix(rows, cols, std::move(out));
}

// Per-pair products ||A_l||_F * ||B_l||_F for a conformable partition pair.
inline std::vector<double> pair_norm_products(const BlockPartition& a,
                                              const BlockPartition& b) {
  require_compatible(a, b);
  std::vector<double> out(a.block_count());
  for (std::size_t l = 0; l < a.block_count(); ++l)
    out[l] = a.block_norm(l) * b.block_norm(l);
  return out;
}

}  // namespace crmm
