#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "crmm/error.hpp"
#include "crmm/matrix.hpp"
#include "crmm/numeric.hpp"
#include "crmm/partition.hpp"
#include "crmm/sketch.hpp"

namespace crmm {

// MatDot-style polynomial codec over the reals.
//
// Encode the t distinct block pairs as matrix polynomials
//
//     pA(x) = sum_j sqrt(w_j) A_j x^(j-1),
//     pB(x) = sum_j sqrt(w_j) B_j x^(t-j),
//
// so their product C(x) = pA(x) pB(x) has degree 2(t-1) and its coefficient
// of x^(t-1) collects exactly the diagonal pairings: sum_j w_j A_j B_j.
// Worker i multiplies the two evaluations at its own node x_i; any 2t-1
// responses determine C(x) by interpolation, and the middle coefficient is a
// fixed linear functional of them.  Fewer than 2t-1 evaluations leave the
// degree-2(t-1) polynomial underdetermined, so decode refuses rather than
// guesses.
//
// Nodes are Chebyshev points on (-1, 1), which keeps the interpolation as
// well-conditioned as a real-valued evaluation code allows.  Conditioning of
// the coefficient functional still degrades exponentially in t; accuracy is
// tight (1e-9 relative) through roughly t = 10 and degrades beyond, which is
// why the compression route below matters.
struct MatDotCode {
  std::size_t blocks = 0;        // t
  std::size_t workers = 0;       // n
  std::vector<double> nodes;     // evaluation point per worker

  std::size_t recovery_threshold() const noexcept { return 2 * blocks - 1; }
};

inline MatDotCode make_matdot_code(std::size_t blocks, std::size_t workers) {
  if (blocks == 0) throw Error(errc::bad_config, "need at least one block");
  if (workers < 2 * blocks - 1) {
    throw Error(errc::bad_config,
                "a " + std::to_string(blocks) + "-block code needs at least " +
                    std::to_string(2 * blocks - 1) + " workers, got " +
                    std::to_string(workers));
  }
  MatDotCode code;
  code.blocks = blocks;
  code.workers = workers;
  code.nodes = chebyshev_points(workers);
  return code;
}

// Recovery threshold after compressing t blocks by a factor rho: the code
// then carries t/rho blocks, so 2(t/rho) - 1 responses suffice.
inline std::size_t compressed_threshold(std::size_t blocks, std::size_t rho) {
  if (rho == 0 || blocks % rho != 0) {
    throw Error(errc::indivisible,
                "compression factor " + std::to_string(rho) +
                    " does not divide the block count " + std::to_string(blocks));
  }
  return 2 * (blocks / rho) - 1;
}

struct MatDotWorkerInput {
  std::size_t worker = 0;
  double node = 0.0;
  DenseMatrix a_eval;  // pA(node), L x tau
  DenseMatrix b_eval;  // pB(node), tau x M
};

// Encode raw blocks with multiplicities; no rescaling beyond sqrt(w).
inline std::vector<MatDotWorkerInput> matdot_encode_blocks(
    const MatDotCode& code, const std::vector<DenseMatrix>& ablocks,
    const std::vector<DenseMatrix>& bblocks, const std::vector<std::uint64_t>& weights) {
  const std::size_t t = code.blocks;
  if (ablocks.size() != t || bblocks.size() != t || weights.size() != t) {
    throw Error(errc::dimension_mismatch,
                "expected " + std::to_string(t) + " block pairs with weights");
  }
  std::vector<MatDotWorkerInput> out;
  out.reserve(code.workers);
  for (std::size_t i = 0; i < code.workers; ++i) {
    const double x = code.nodes[i];
    // Horner over matrix coefficients, highest power first.
    DenseMatrix pa = DenseMatrix::zeros(ablocks[0].rows(), ablocks[0].cols());
    DenseMatrix pb = DenseMatrix::zeros(bblocks[0].rows(), bblocks[0].cols());
    for (std::size_t j = t; j > 0; --j) {
      const double w = std::sqrt(static_cast<double>(weights[j - 1]));
      pa = add(scale(pa, x), scale(ablocks[j - 1], w));      // coefficient of x^(j-1)
      pb = add(scale(pb, x), scale(bblocks[t - j], std::sqrt(static_cast<double>(weights[t - j]))));
      // pB coefficient of x^(t-j) is block j; iterating j downward visits
      // ascending powers' coefficients in the right Horner order.
    }
    out.push_back(MatDotWorkerInput{i, x, std::move(pa), std::move(pb)});
  }
  return out;
}

// Plan-level encoding: blocks are the CR-rescaled distinct blocks, so the
// decoded coefficient equals the weighted sketch estimate.
inline std::vector<MatDotWorkerInput> matdot_encode(const MatDotCode& code,
                                                    const SamplingPlan& plan,
                                                    const BlockPartition& a,
                                                    const BlockPartition& b) {
  if (plan.t() != code.blocks) {
    throw Error(errc::dimension_mismatch,
                "plan has " + std::to_string(plan.t()) + " distinct blocks, code expects " +
                    std::to_string(code.blocks));
  }
  const ScaledBlocks blocks = scaled_distinct_blocks(a, b, plan);
  return matdot_encode_blocks(code, blocks.a, blocks.b, blocks.weights);
}

struct MatDotResponse {
  std::size_t worker = 0;
  double node = 0.0;
  DenseMatrix value;  // C(node) = pA(node) * pB(node)
};

inline MatDotResponse matdot_worker_multiply(const MatDotWorkerInput& input) {
  return MatDotResponse{input.worker, input.node, matmul(input.a_eval, input.b_eval)};
}

// Extract sum_j w_j A_j B_j from at least 2t-1 evaluations of C(x).
//
// The coefficient of x^(t-1) of the interpolating polynomial is
// sum_i gamma_i C(x_i), where gamma_i is the x^(t-1) coefficient of the i-th
// Lagrange basis polynomial: with the master polynomial m(x) = prod (x - x_i)
// and barycentric weight 1/q_i(x_i) for q_i = m/(x - x_i),
//
//     gamma_i = [x^(t-1)] q_i / q_i(x_i).
//
// The weights and quotient coefficients are computed once per response
// subset; the matrix data enters only through the final linear combination.
inline DenseMatrix matdot_decode(const MatDotCode& code,
                                 std::vector<MatDotResponse> responses) {
  const std::size_t need = code.recovery_threshold();
  std::sort(responses.begin(), responses.end(),
            [](const MatDotResponse& l, const MatDotResponse& r) { return l.worker < r.worker; });
  responses.erase(std::unique(responses.begin(), responses.end(),
                              [](const MatDotResponse& l, const MatDotResponse& r) {
                                return l.worker == r.worker;
                              }),
                  responses.end());
  if (responses.size() < need) {
    throw Error(errc::below_threshold,
                std::to_string(responses.size()) + " responses cannot determine a degree-" +
                    std::to_string(2 * (code.blocks - 1)) + " polynomial; " +
                    std::to_string(need) + " are required");
  }
  responses.resize(need);  // lowest worker ids win, deterministically

  std::vector<double> points(need);
  for (std::size_t i = 0; i < need; ++i) points[i] = responses[i].node;
  const std::vector<double> master = poly_from_roots(points);
  std::vector<double> gamma(need);
  for (std::size_t i = 0; i < need; ++i) {
    const std::vector<double> q = synthetic_division(master, points[i]);
    gamma[i] = q[code.blocks - 1] / poly_eval(q, points[i]);
  }
  const DenseMatrix& first = responses[0].value;
  std::vector<double> out(first.rows() * first.cols(), 0.0);
  for (std::size_t i = 0; i < need; ++i) {
    const DenseMatrix& v = responses[i].value;
    if (!v.same_shape(first)) {
      throw Error(errc::dimension_mismatch, "worker responses disagree on shape");
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += gamma[i] * v.data()[k];
  }
  return DenseMatrix(first.rows(), first.cols(), std::move(out));
}

}  // namespace crmm
