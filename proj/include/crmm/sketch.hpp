#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "crmm/error.hpp"
#include "crmm/matrix.hpp"
#include "crmm/partition.hpp"
#include "crmm/sampling.hpp"

namespace crmm {

// Sketched factors C and R with C*R ~= AB.
//
// The per-draw ("unweighted") sketch keeps one column block of C and one row
// block of R per draw, repeats included, each rescaled by
// 1/sqrt(|S| Pi_draw).  The weighted sketch keeps one block per *distinct*
// index j, rescaled by sqrt(w_j) / sqrt(|S| Pi_j); multiplicities move into
// the scale factor, which shrinks storage by (||w||_1/||w||_0)^2 while the
// product C*R stays identical.
struct SketchPair {
  DenseMatrix c;
  DenseMatrix r;
};

namespace detail {

inline void require_plan_matches(const BlockPartition& a, const BlockPartition& b,
                                 const SamplingPlan& plan) {
  require_compatible(a, b);
  if (plan.dist.pi.size() != a.block_count()) {
    throw Error(errc::dimension_mismatch,
                "plan distribution covers " + std::to_string(plan.dist.pi.size()) +
                    " blocks, partition has " + std::to_string(a.block_count()));
  }
  if (plan.sample.draws.empty()) {
    throw Error(errc::degenerate_distribution, "plan holds no draws");
  }
  for (std::size_t d : plan.sample.draws) {
    if (d >= a.block_count() || plan.dist.pi[d] <= 0.0) {
      throw Error(errc::degenerate_distribution,
                  "draw hits block " + std::to_string(d) +
                      " which has zero probability");
    }
  }
}

// Assemble column blocks / row blocks (scaled) into one matrix.
inline DenseMatrix concat_column_blocks(const BlockPartition& a,
                                        const std::vector<std::size_t>& ids,
                                        const std::vector<double>& factors) {
  const std::size_t rows = a.matrix().rows();
  const std::size_t tau = a.block_width();
  const std::size_t cols = tau * ids.size();
  std::vector<double> buf(rows * cols);
  for (std::size_t k = 0; k < ids.size(); ++k)
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < tau; ++j)
        buf[i * cols + k * tau + j] = factors[k] * a.block_entry(ids[k], i, j);
  return DenseMatrix(rows, cols, std::move(buf));
}

inline DenseMatrix concat_row_blocks(const BlockPartition& b,
                                     const std::vector<std::size_t>& ids,
                                     const std::vector<double>& factors) {
  const std::size_t cols = b.matrix().cols();
  const std::size_t tau = b.block_width();
  const std::size_t rows = tau * ids.size();
  std::vector<double> buf(rows * cols);
  for (std::size_t k = 0; k < ids.size(); ++k)
    for (std::size_t i = 0; i < tau; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        buf[(k * tau + i) * cols + j] = factors[k] * b.block_entry(ids[k], i, j);
  return DenseMatrix(rows, cols, std::move(buf));
}

}  // namespace detail

// Per-draw sketch: |S| block pairs, factor 1/sqrt(|S| Pi) each.
inline SketchPair build_unweighted_sketch(const BlockPartition& a, const BlockPartition& b,
                                          const SamplingPlan& plan) {
  detail::require_plan_matches(a, b, plan);
  const double total = static_cast<double>(plan.total_draws());
  std::vector<double> factors(plan.sample.draws.size());
  for (std::size_t k = 0; k < plan.sample.draws.size(); ++k)
    factors[k] = 1.0 / std::sqrt(total * plan.dist.pi[plan.sample.draws[k]]);
  return SketchPair{detail::concat_column_blocks(a, plan.sample.draws, factors),
                    detail::concat_row_blocks(b, plan.sample.draws, factors)};
}

// Weighted sketch: one block pair per distinct index, factor
// sqrt(w_j) / sqrt(|S| Pi_j) each.
inline SketchPair build_weighted_sketch(const BlockPartition& a, const BlockPartition& b,
                                        const SamplingPlan& plan) {
  detail::require_plan_matches(a, b, plan);
  const double total = static_cast<double>(plan.total_draws());
  std::vector<double> factors(plan.sample.distinct.size());
  for (std::size_t j = 0; j < plan.sample.distinct.size(); ++j) {
    const double pi = plan.dist.pi[plan.sample.distinct[j]];
    factors[j] = std::sqrt(static_cast<double>(plan.sample.weights[j])) /
                 std::sqrt(total * pi);
  }
  return SketchPair{detail::concat_column_blocks(a, plan.sample.distinct, factors),
                    detail::concat_row_blocks(b, plan.sample.distinct, factors)};
}

inline DenseMatrix estimate_product(const SketchPair& sketch) {
  return matmul(sketch.c, sketch.r);
}

// Distinct blocks rescaled by 1/sqrt(|S| Pi_j) on each side, shared input of
// both coded-computation paths.  The per-block product of a pair is then the
// fully rescaled term X_j = A_j B_j / (|S| Pi_j), and the weighted
// combination sum_j w_j X_j equals the weighted sketch estimate.
struct ScaledBlocks {
  std::vector<DenseMatrix> a;
  std::vector<DenseMatrix> b;
  std::vector<std::uint64_t> weights;  // w restricted to the distinct set
};

inline ScaledBlocks scaled_distinct_blocks(const BlockPartition& a, const BlockPartition& b,
                                           const SamplingPlan& plan) {
  detail::require_plan_matches(a, b, plan);
  const double total = static_cast<double>(plan.total_draws());
  ScaledBlocks out;
  out.weights = plan.sample.weights;
  for (std::size_t j = 0; j < plan.sample.distinct.size(); ++j) {
    const std::size_t idx = plan.sample.distinct[j];
    const double f = 1.0 / std::sqrt(total * plan.dist.pi[idx]);
    out.a.push_back(a.materialize_block(idx, f));
    out.b.push_back(b.materialize_block(idx, f));
  }
  return out;
}

// Serial reference for the coded paths: sum_j w_j X_j computed directly.
inline DenseMatrix weighted_block_sum(const ScaledBlocks& blocks) {
  if (blocks.a.empty()) {
    throw Error(errc::degenerate_distribution, "no blocks to sum");
  }
  DenseMatrix acc = DenseMatrix::zeros(blocks.a[0].rows(), blocks.b[0].cols());
  for (std::size_t j = 0; j < blocks.a.size(); ++j) {
    acc = add(acc, scale(matmul(blocks.a[j], blocks.b[j]),
                         static_cast<double>(blocks.weights[j])));
  }
  return acc;
}

}  // namespace crmm
