#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crmm/error.hpp"
#include "crmm/partition.hpp"
#include "crmm/rng.hpp"

namespace crmm {

// Importance sampling over block pairs.
//
// A conformable partition pair splits the product AB into K rank-tau terms
// A_l B_l.  Sampling block pairs i.i.d. with probabilities {Pi_l} and
// rescaling each picked term by 1/Pi_l gives an unbiased one-sample
// estimator of AB; the variance of that estimator is governed by
//
//     f(q) = sum_l ||A_l||_F^2 ||B_l||_F^2 / q_l,
//
// which is minimised over probability vectors by
//
//     Pi_l = ||A_l||_F ||B_l||_F / sum_j ||A_j||_F ||B_j||_F,
//
// with minimum value (sum_l ||A_l||_F ||B_l||_F)^2.

struct SamplingDistribution {
  std::vector<double> pi;             // probability per block, zeros allowed
  std::vector<std::size_t> support;   // indices with pi > 0, ascending

  std::size_t block_count() const noexcept { return pi.size(); }
};

// Variance-optimal distribution for a partition pair.  Blocks whose norm
// product is zero get probability zero (they contribute nothing to AB).
// All-zero pairs are an error: no distribution exists.
inline SamplingDistribution compute_distribution(const BlockPartition& a,
                                                 const BlockPartition& b) {
  const std::vector<double> c = pair_norm_products(a, b);
  double total = 0.0;
  for (double v : c) total += v;
  if (total == 0.0) {
    throw Error(errc::degenerate_distribution,
                "every block pair has zero norm product");
  }
  SamplingDistribution dist;
  dist.pi.resize(c.size());
  for (std::size_t l = 0; l < c.size(); ++l) {
    dist.pi[l] = c[l] / total;
    if (dist.pi[l] > 0.0) dist.support.push_back(l);
  }
  return dist;
}

inline SamplingDistribution uniform_distribution(std::size_t blocks) {
  if (blocks == 0) throw Error(errc::degenerate_distribution, "no blocks");
  SamplingDistribution dist;
  dist.pi.assign(blocks, 1.0 / static_cast<double>(blocks));
  dist.support.resize(blocks);
  for (std::size_t l = 0; l < blocks; ++l) dist.support[l] = l;
  return dist;
}

// f(q) for an arbitrary probability vector q.  Pairs with zero norm product
// are skipped regardless of q; a zero q_l on a contributing pair means that
// term can never be sampled, so the functional diverges.
inline double variance_functional(const BlockPartition& a, const BlockPartition& b,
                                  const std::vector<double>& q) {
  const std::vector<double> c = pair_norm_products(a, b);
  if (q.size() != c.size()) {
    throw Error(errc::dimension_mismatch, "q has wrong length");
  }
  double acc = 0.0;
  for (std::size_t l = 0; l < c.size(); ++l) {
    if (c[l] == 0.0) continue;
    if (q[l] <= 0.0) {
      throw Error(errc::infinite_variance,
                  "q assigns zero probability to contributing block " +
                      std::to_string(l));
    }
    acc += (c[l] * c[l]) / q[l];
  }
  return acc;
}

// Closed-form minimum of the variance functional.
inline double optimal_variance_functional(const BlockPartition& a,
                                          const BlockPartition& b) {
  const std::vector<double> c = pair_norm_products(a, b);
  double sum = 0.0;
  for (double v : c) sum += v;
  return sum * sum;
}

// One sampling run: the draw multiset (in draw order), the distinct index
// set (ascending), and the multiplicity of each distinct index.
struct SampleMultiset {
  std::vector<std::size_t> draws;      // every draw, repeats included
  std::vector<std::size_t> distinct;   // ascending
  std::vector<std::uint64_t> weights;  // aligned with distinct, all >= 1

  static SampleMultiset from_draws(std::vector<std::size_t> draws) {
    std::map<std::size_t, std::uint64_t> tally;
    for (std::size_t d : draws) ++tally[d];
    SampleMultiset s;
    s.draws = std::move(draws);
    for (const auto& [idx, count] : tally) {
      s.distinct.push_back(idx);
      s.weights.push_back(count);
    }
    return s;
  }
};

// A plan binds a multiset to the distribution it was drawn from; the sketch
// rescaling needs both.
struct SamplingPlan {
  SamplingDistribution dist;
  SampleMultiset sample;
  std::uint64_t seed = 0;

  std::size_t t() const noexcept { return sample.distinct.size(); }
  std::size_t total_draws() const noexcept { return sample.draws.size(); }
};

// Storage of the weighted sketch relative to the per-draw sketch:
// (||w||_1 / ||w||_0)^2.
inline double storage_ratio(const SampleMultiset& s) {
  return (static_cast<double>(s.draws.size()) / static_cast<double>(s.distinct.size())) *
         (static_cast<double>(s.draws.size()) / static_cast<double>(s.distinct.size()));
}

namespace detail {

inline std::vector<double> cumulative(const SamplingDistribution& dist) {
  std::vector<double> cum(dist.pi.size());
  double acc = 0.0;
  for (std::size_t l = 0; l < dist.pi.size(); ++l) {
    acc += dist.pi[l];
    cum[l] = acc;
  }
  cum.back() = std::max(cum.back(), 1.0);  // guard the top bin against rounding
  return cum;
}

inline std::size_t draw_index(const std::vector<double>& cum, SplitRng& rng) {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return static_cast<std::size_t>(it - cum.begin());
}

}  // namespace detail

// Draw i.i.d. from the distribution until `t` distinct blocks have appeared.
// Every draw lands in the multiset, so the number of draws |S| is >= t and
// random.  `cap` bounds the total number of draws; heavy-tailed
// distributions can make the wait for the t-th distinct block very long, and
// exceeding the cap is reported rather than spun on.
inline SamplingPlan draw_until_distinct(const SamplingDistribution& dist, std::size_t t,
                                        std::uint64_t seed,
                                        std::uint64_t cap = 1000000000ULL) {
  if (t == 0 || t > dist.support.size()) {
    throw Error(errc::degenerate_distribution,
                "cannot collect " + std::to_string(t) + " distinct blocks from a support of " +
                    std::to_string(dist.support.size()));
  }
  SplitRng rng(seed);
  const std::vector<double> cum = detail::cumulative(dist);
  std::vector<bool> seen(dist.pi.size(), false);
  std::size_t found = 0;
  std::vector<std::size_t> draws;
  while (found < t) {
    if (draws.size() >= cap) {
      throw Error(errc::draw_cap_exceeded,
                  "draw cap " + std::to_string(cap) + " hit with " +
                      std::to_string(found) + " of " + std::to_string(t) +
                      " distinct blocks");
    }
    const std::size_t idx = detail::draw_index(cum, rng);
    draws.push_back(idx);
    if (!seen[idx]) {
      seen[idx] = true;
      ++found;
    }
  }
  SamplingPlan plan;
  plan.dist = dist;
  plan.sample = SampleMultiset::from_draws(std::move(draws));
  plan.seed = seed;
  return plan;
}

// Alternate stopping rule: exactly `count` draws, however many distinct
// blocks that produces.  Unlike the until-distinct rule this keeps the
// estimator exactly unbiased, at the cost of an unpredictable distinct count.
inline SamplingPlan draw_fixed_count(const SamplingDistribution& dist, std::size_t count,
                                     std::uint64_t seed) {
  if (count == 0) throw Error(errc::degenerate_distribution, "zero draws requested");
  SplitRng rng(seed);
  const std::vector<double> cum = detail::cumulative(dist);
  std::vector<std::size_t> draws(count);
  for (std::size_t i = 0; i < count; ++i) draws[i] = detail::draw_index(cum, rng);
  SamplingPlan plan;
  plan.dist = dist;
  plan.sample = SampleMultiset::from_draws(std::move(draws));
  plan.seed = seed;
  return plan;
}

// Degenerate plan that enumerates every block exactly once under the uniform
// distribution.  The sketch rescaling then multiplies every block by one, so
// the estimate reproduces AB exactly; used as the uncompressed baseline.
inline SamplingPlan enumeration_plan(std::size_t blocks) {
  std::vector<std::size_t> draws(blocks);
  for (std::size_t l = 0; l < blocks; ++l) draws[l] = l;
  SamplingPlan plan;
  plan.dist = uniform_distribution(blocks);
  plan.sample = SampleMultiset::from_draws(std::move(draws));
  plan.seed = 0;
  return plan;
}

// One-pass sampling from a stream of non-negative values, returning the
// index of the element picked with probability value / total.  Keeps a
// running sum D and replaces the retained index with probability value / D,
// so no second pass and no stored prefix sums are needed.
template <typename Iterator>
std::size_t select_stream(Iterator first, Iterator last, SplitRng& rng) {
  double running = 0.0;
  std::size_t kept = 0;
  bool any = false;
  std::size_t at = 0;
  for (Iterator it = first; it != last; ++it, ++at) {
    const double v = static_cast<double>(*it);
    if (v < 0.0 || !std::isfinite(v)) {
      throw Error(errc::degenerate_distribution,
                  "stream value at index " + std::to_string(at) + " is not a weight");
    }
    if (v == 0.0) continue;
    running += v;
    if (rng.uniform01() * running < v) {
      kept = at;
      any = true;
    }
  }
  if (!any) {
    throw Error(errc::degenerate_distribution, "stream has no positive value");
  }
  return kept;
}

inline std::size_t select_stream(const std::vector<double>& values, SplitRng& rng) {
  return select_stream(values.begin(), values.end(), rng);
}

}  // namespace crmm
