#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "crmm/error.hpp"
#include "crmm/matrix.hpp"
#include "crmm/numeric.hpp"
#include "crmm/partition.hpp"
#include "crmm/sketch.hpp"

namespace crmm {

// Straggler-tolerant recovery of the weighted block sum sum_j w_j X_j via
// gradient coding.  Worker i computes the combination
//
//     partial_i = sum_j G[i,j] * w_j * X_j
//
// and any admissible responder set F admits a vector a with a^T G = 1^T, so
// sum_{i in F} a_i partial_i recovers the weighted sum no matter which
// workers straggle.
//
// Two constructions back the scheme:
//
//  * replica_groups: binary G.  Workers are split into disjoint groups that
//    all hold the same chunk of blocks; each block is replicated once per
//    group member.  Tolerates (group size - 1) stragglers, and decoding just
//    picks the lowest responding worker of each group.  Used whenever the
//    required group size divides the worker count.
//
//  * cyclic_classes: real-valued G.  Worker classes hold cyclically shifted
//    windows of blocks; the row of class v evaluates the polynomial
//    f_v(x) = prod_{j outside the window} (x - alpha_j) at the block nodes
//    alpha, so a row is zero exactly outside its window.  Every set of
//    (blocks - window + 1) classes spans the all-ones row because their
//    f_v form a basis of the polynomials of degree <= blocks - window, and
//    killing one worker per class costs the most; this yields the same
//    tolerance as replica groups without the divisibility constraint.
enum class GcKind { replica_groups, cyclic_classes };

struct GcScheme {
  std::size_t workers = 0;      // n
  std::size_t stragglers = 0;   // s, guaranteed tolerance
  std::size_t blocks = 0;       // t, one task per block
  std::size_t compression = 1;  // rho relative to the base scheme
  GcKind kind = GcKind::replica_groups;

  // Row-major n x t coding matrix.
  std::vector<double> coding;

  // replica_groups: workers [g*group_size, (g+1)*group_size) form group g.
  std::size_t group_size = 0;
  // cyclic_classes: workers [v*class_size, (v+1)*class_size) form class v;
  // class v covers blocks {v, v+1, ..., v+window-1} mod blocks.
  std::size_t class_size = 0;
  std::size_t window = 0;
  std::vector<double> nodes;  // alpha_j per block (cyclic_classes only)

  std::size_t recovery_threshold() const noexcept { return workers - stragglers; }

  double coding_entry(std::size_t worker, std::size_t block) const {
    return coding[worker * blocks + block];
  }

  std::vector<std::size_t> worker_support(std::size_t worker) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < blocks; ++j)
      if (coding_entry(worker, j) != 0.0) out.push_back(j);
    return out;
  }
};

namespace detail {

// Monomial coefficients of the class polynomials f_v, each normalised so
// that its largest node evaluation has magnitude one.  Shared by scheme
// construction and decoding.
struct CyclicPolys {
  std::vector<std::vector<double>> coeffs;  // per class, ascending, len = t - window + 1
  std::vector<std::vector<double>> rows;    // per class, evaluations at all nodes
};

inline CyclicPolys cyclic_polys(std::size_t blocks, std::size_t window,
                                const std::vector<double>& nodes) {
  CyclicPolys out;
  out.coeffs.resize(blocks);
  out.rows.resize(blocks);
  for (std::size_t v = 0; v < blocks; ++v) {
    std::vector<double> roots;
    for (std::size_t off = window; off < blocks; ++off)
      roots.push_back(nodes[(v + off) % blocks]);
    std::vector<double> c = poly_from_roots(roots);
    std::vector<double> row(blocks, 0.0);
    double peak = 0.0;
    for (std::size_t j = 0; j < blocks; ++j) {
      row[j] = poly_eval(c, nodes[j]);
      peak = std::max(peak, std::fabs(row[j]));
    }
    for (double& x : c) x /= peak;
    for (double& x : row) x /= peak;
    // Snap the structural zeros: evaluation at a root is exact up to
    // rounding, and the decoder relies on the support pattern.
    for (std::size_t off = window; off < blocks; ++off) row[(v + off) % blocks] = 0.0;
    out.coeffs[v] = std::move(c);
    out.rows[v] = std::move(row);
  }
  return out;
}

}  // namespace detail

// Base scheme: n workers, n blocks, groups of s+1 workers each holding the
// same s+1 blocks.  Requires (s+1) | n.
inline GcScheme build_gc_scheme(std::size_t workers, std::size_t stragglers) {
  const std::size_t r = stragglers + 1;
  if (workers == 0 || workers % r != 0) {
    throw Error(errc::indivisible,
                "worker count " + std::to_string(workers) +
                    " is not a multiple of s+1 = " + std::to_string(r));
  }
  GcScheme scheme;
  scheme.workers = workers;
  scheme.stragglers = stragglers;
  scheme.blocks = workers;
  scheme.kind = GcKind::replica_groups;
  scheme.group_size = r;
  scheme.coding.assign(workers * workers, 0.0);
  for (std::size_t i = 0; i < workers; ++i) {
    const std::size_t g = i / r;
    for (std::size_t j = g * r; j < (g + 1) * r; ++j) scheme.coding[i * scheme.blocks + j] = 1.0;
  }
  return scheme;
}

// Trade extra stragglers for compression.  With a factor rho the scheme
// covers t/rho blocks, replicates each rho*(s+1) times, and tolerates
// rho*(s+1) - 1 stragglers while the per-worker load stays at s+1 blocks.
//
// Preconditions: rho >= 1, rho | t, and rho*(s+1) <= n.  When the replica
// count rho*(s+1) divides n the result keeps the binary replica-group form;
// otherwise it switches to the cyclic-class construction, which achieves the
// same tolerance with real coefficients.
inline GcScheme compressed_tolerance(const GcScheme& base, std::size_t rho) {
  if (base.kind != GcKind::replica_groups || base.blocks != base.workers) {
    throw Error(errc::bad_config, "compression applies to a base scheme");
  }
  if (rho == 0 || base.blocks % rho != 0) {
    throw Error(errc::indivisible,
                "compression factor " + std::to_string(rho) +
                    " does not divide the block count " + std::to_string(base.blocks));
  }
  const std::size_t n = base.workers;
  const std::size_t load = base.stragglers + 1;  // per-worker blocks, preserved
  const std::size_t replicas = rho * load;       // per-block replicas = s_new + 1
  if (replicas > n) {
    throw Error(errc::bad_config,
                "compression " + std::to_string(rho) + " needs " +
                    std::to_string(replicas) + " replicas per block but only " +
                    std::to_string(n) + " workers exist");
  }
  if (rho == 1) return base;

  GcScheme scheme;
  scheme.workers = n;
  scheme.stragglers = replicas - 1;
  scheme.blocks = base.blocks / rho;
  scheme.compression = rho;
  scheme.coding.assign(n * scheme.blocks, 0.0);

  if (n % replicas == 0) {
    scheme.kind = GcKind::replica_groups;
    scheme.group_size = replicas;
    // n/replicas groups, each holding `load` consecutive blocks.
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t g = i / replicas;
      for (std::size_t j = g * load; j < (g + 1) * load; ++j)
        scheme.coding[i * scheme.blocks + j] = 1.0;
    }
    return scheme;
  }

  // Cyclic classes: t/rho classes of n/(t/rho) workers each.  rho | t and
  // t = n make the class size integral.
  scheme.kind = GcKind::cyclic_classes;
  scheme.class_size = n / scheme.blocks;
  scheme.window = load;
  scheme.nodes = chebyshev_points(scheme.blocks);
  const detail::CyclicPolys polys =
      detail::cyclic_polys(scheme.blocks, scheme.window, scheme.nodes);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t v = i / scheme.class_size;
    for (std::size_t j = 0; j < scheme.blocks; ++j)
      scheme.coding[i * scheme.blocks + j] = polys.rows[v][j];
  }
  return scheme;
}

// Decoding vector for a responder set: a with a^T G = 1^T supported on the
// responders.  Throws when the set cannot decode (some block has no live
// information).  Deterministic: ties break toward the lowest worker id.
inline std::vector<double> decoding_vector(const GcScheme& scheme,
                                           const std::vector<std::size_t>& responders) {
  std::vector<bool> live(scheme.workers, false);
  for (std::size_t i : responders) {
    if (i >= scheme.workers) {
      throw Error(errc::bad_config, "responder id " + std::to_string(i) + " out of range");
    }
    live[i] = true;
  }
  std::vector<double> a(scheme.workers, 0.0);

  if (scheme.kind == GcKind::replica_groups) {
    const std::size_t groups = scheme.workers / scheme.group_size;
    for (std::size_t g = 0; g < groups; ++g) {
      std::size_t pick = scheme.workers;
      for (std::size_t i = g * scheme.group_size; i < (g + 1) * scheme.group_size; ++i) {
        if (live[i]) {
          pick = i;
          break;
        }
      }
      if (pick == scheme.workers) {
        throw Error(errc::undecodable_set,
                    "no responder holds block group " + std::to_string(g));
      }
      a[pick] = 1.0;
    }
    return a;
  }

  // Cyclic classes: find the lowest live worker per class, then combine the
  // class polynomials into the constant polynomial 1.  The class rows span
  // the degree-(t - window) polynomials whenever enough classes are live, so
  // solving for the monomial coefficients of 1 yields the combination.
  const std::size_t t = scheme.blocks;
  const std::size_t dim = t - scheme.window + 1;  // coefficient count
  std::vector<std::size_t> rep;                   // lowest live worker per live class
  std::vector<std::size_t> cls;
  for (std::size_t v = 0; v < t && rep.size() < dim; ++v) {
    for (std::size_t i = v * scheme.class_size; i < (v + 1) * scheme.class_size; ++i) {
      if (live[i]) {
        rep.push_back(i);
        cls.push_back(v);
        break;
      }
    }
  }
  if (rep.size() < dim) {
    throw Error(errc::undecodable_set,
                "only " + std::to_string(rep.size()) + " worker classes responded, " +
                    std::to_string(dim) + " are needed");
  }
  const detail::CyclicPolys polys = detail::cyclic_polys(t, scheme.window, scheme.nodes);
  // Columns: coefficient vectors of the selected class polynomials.
  std::vector<double> system(dim * dim);
  for (std::size_t col = 0; col < dim; ++col)
    for (std::size_t row = 0; row < dim; ++row)
      system[row * dim + col] = polys.coeffs[cls[col]][row];
  std::vector<double> beta(dim, 0.0);
  beta[0] = 1.0;  // target polynomial: the constant 1
  if (!solve_dense(std::move(system), beta)) {
    throw Error(errc::undecodable_set, "responding classes are linearly dependent");
  }
  for (std::size_t k = 0; k < dim; ++k) a[rep[k]] = beta[k];

  // The combination must reproduce the all-ones row on every block.
  double worst = 0.0;
  for (std::size_t j = 0; j < t; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k)
      acc += beta[k] * scheme.coding_entry(rep[k], j);
    worst = std::max(worst, std::fabs(acc - 1.0));
  }
  if (worst > 1e-8) {
    throw Error(errc::undecodable_set, "decoding residual too large");
  }
  return a;
}

// Per-worker coded task: indices into the shared scaled-block store plus the
// combination coefficients G[i,j] * w_j.
struct GcTask {
  std::size_t worker = 0;
  std::vector<std::size_t> block_ids;
  std::vector<double> coeffs;
};

struct GcEncoding {
  std::shared_ptr<const ScaledBlocks> blocks;
  std::vector<GcTask> tasks;  // one per worker
};

// Distribute the plan's distinct blocks to workers.  The CR rescaling
// 1/(|S| Pi_j) is folded into the stored blocks and the multiplicities w_j
// into the coefficients, so decode yields the weighted sketch estimate
// directly.
inline GcEncoding encode_tasks(const GcScheme& scheme, const SamplingPlan& plan,
                               const BlockPartition& a, const BlockPartition& b) {
  if (plan.t() != scheme.blocks) {
    throw Error(errc::dimension_mismatch,
                "plan has " + std::to_string(plan.t()) + " distinct blocks, scheme expects " +
                    std::to_string(scheme.blocks));
  }
  GcEncoding enc;
  enc.blocks = std::make_shared<ScaledBlocks>(scaled_distinct_blocks(a, b, plan));
  enc.tasks.resize(scheme.workers);
  for (std::size_t i = 0; i < scheme.workers; ++i) {
    GcTask& task = enc.tasks[i];
    task.worker = i;
    for (std::size_t j = 0; j < scheme.blocks; ++j) {
      const double g = scheme.coding_entry(i, j);
      if (g == 0.0) continue;
      task.block_ids.push_back(j);
      task.coeffs.push_back(g * static_cast<double>(plan.sample.weights[j]));
    }
  }
  return enc;
}

// partial_i = sum_j G[i,j] w_j X_j over the worker's assigned blocks.
inline DenseMatrix worker_compute(const GcEncoding& enc, std::size_t worker) {
  if (worker >= enc.tasks.size()) {
    throw Error(errc::bad_config, "worker id out of range");
  }
  const GcTask& task = enc.tasks[worker];
  const ScaledBlocks& blocks = *enc.blocks;
  DenseMatrix acc = DenseMatrix::zeros(blocks.a.at(0).rows(), blocks.b.at(0).cols());
  for (std::size_t k = 0; k < task.block_ids.size(); ++k) {
    const std::size_t j = task.block_ids[k];
    acc = add(acc, scale(matmul(blocks.a[j], blocks.b[j]), task.coeffs[k]));
  }
  return acc;
}

// Recover sum_j w_j X_j from the responders' partial sums.  `partials` is
// indexed by worker id; only entries named in `responders` are touched.
inline DenseMatrix gc_decode(const GcScheme& scheme,
                             const std::vector<std::size_t>& responders,
                             const std::vector<DenseMatrix>& partials) {
  const std::vector<double> a = decoding_vector(scheme, responders);
  DenseMatrix acc;
  bool first = true;
  for (std::size_t i = 0; i < scheme.workers; ++i) {
    if (a[i] == 0.0) continue;
    if (i >= partials.size() || partials[i].size() == 0) {
      throw Error(errc::undecodable_set,
                  "decoding needs the partial sum of worker " + std::to_string(i));
    }
    if (first) {
      acc = scale(partials[i], a[i]);
      first = false;
    } else {
      acc = add(acc, scale(partials[i], a[i]));
    }
  }
  return acc;
}

}  // namespace crmm
