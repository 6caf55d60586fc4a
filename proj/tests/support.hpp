#pragma once

// Shared helpers for the test suite: deterministic random matrices, relative
// error metrics, plan builders, and a lexicographic combination iterator for
// exhaustive responder-set sweeps.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "crmm/matrix.hpp"
#include "crmm/partition.hpp"
#include "crmm/rng.hpp"
#include "crmm/sampling.hpp"
#include "crmm/sketch.hpp"

namespace crmm_test {

inline crmm::DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols,
                                         std::uint64_t seed) {
  crmm::SplitRng rng(seed);
  std::vector<double> buf(rows * cols);
  for (double& v : buf) v = rng.gaussian();
  return crmm::DenseMatrix(rows, cols, std::move(buf));
}

// Gaussian matrix whose l-th block along the given axis is scaled by (l + 1),
// so block norms (and hence the optimal distribution) are strongly skewed.
inline crmm::DenseMatrix skewed_matrix(std::size_t rows, std::size_t cols,
                                       std::size_t blocks, crmm::BlockAxis axis,
                                       std::uint64_t seed) {
  crmm::SplitRng rng(seed);
  std::vector<double> buf(rows * cols);
  const std::size_t width =
      (axis == crmm::BlockAxis::columns ? cols : rows) / blocks;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t block =
          (axis == crmm::BlockAxis::columns ? j : i) / width;
      buf[i * cols + j] = static_cast<double>(block + 1) * rng.gaussian();
    }
  return crmm::DenseMatrix(rows, cols, std::move(buf));
}

inline double rel_distance(const crmm::DenseMatrix& a, const crmm::DenseMatrix& b) {
  return crmm::frobenius_distance(a, b) /
         std::max(1e-300, crmm::frobenius_norm(b));
}

// Draw from the optimal distribution until every block is distinct-collected;
// the coupon-collector overshoot makes the multiplicities nontrivial.
inline crmm::SamplingPlan coupon_plan(const crmm::BlockPartition& a,
                                      const crmm::BlockPartition& b,
                                      std::uint64_t seed) {
  const crmm::SamplingDistribution dist = crmm::compute_distribution(a, b);
  return crmm::draw_until_distinct(dist, a.block_count(), seed);
}

// Serial reference for the coded paths: the weighted combination of the
// rescaled distinct blocks, i.e. the weighted sketch estimate computed
// without any worker machinery.
inline crmm::DenseMatrix weighted_oracle(const crmm::BlockPartition& a,
                                         const crmm::BlockPartition& b,
                                         const crmm::SamplingPlan& plan) {
  return crmm::weighted_block_sum(crmm::scaled_distinct_blocks(a, b, plan));
}

inline std::vector<std::size_t> first_combination(std::size_t k) {
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), 0);
  return c;
}

// Advance a k-combination of {0, ..., n-1} in lexicographic order; returns
// false once the last combination has been visited.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] + (k - i) < n) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace crmm_test
