#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "crmm/error.hpp"
#include "crmm/gc.hpp"
#include "crmm/matdot.hpp"
#include "crmm/matrix.hpp"
#include "crmm/partition.hpp"
#include "crmm/rng.hpp"
#include "crmm/sampling.hpp"
#include "crmm/sim.hpp"
#include "crmm/sketch.hpp"

namespace crmm {

// Random instance generator.  Entries are standard Gaussians; block pair l
// (column block of A, row block of B) is scaled by a shared factor
// (1 - u_l)^(-exponent/2), u_l uniform.  exponent = 0 gives unit scales and
// a near-uniform sampling distribution; larger exponents give heavier tails
// and a more skewed distribution.  Scaling the two sides by the same factor
// keeps the per-block norms of A and B proportional.
struct InstanceConfig {
  std::size_t rows_a = 0;  // L
  std::size_t inner = 0;   // N, must be a multiple of blocks
  std::size_t cols_b = 0;  // M
  std::size_t blocks = 0;  // K
  double exponent = 2.0;
};

struct Instance {
  DenseMatrix a;
  DenseMatrix b;
  double norm_product = 0.0;  // realized ||A||_F^2 ||B||_F^2
};

inline Instance gen_instance(const InstanceConfig& cfg, std::uint64_t seed) {
  if (cfg.rows_a == 0 || cfg.inner == 0 || cfg.cols_b == 0 || cfg.blocks == 0) {
    throw Error(errc::bad_config, "instance dimensions must be positive");
  }
  if (cfg.inner % cfg.blocks != 0) {
    throw Error(errc::indivisible,
                "block count " + std::to_string(cfg.blocks) +
                    " does not divide the inner dimension " + std::to_string(cfg.inner));
  }
  if (!(cfg.exponent >= 0.0)) {
    throw Error(errc::bad_config, "exponent must be nonnegative");
  }
  const std::size_t tau = cfg.inner / cfg.blocks;
  SplitRng scale_rng = SplitRng(seed).split(1);
  SplitRng a_rng = SplitRng(seed).split(2);
  SplitRng b_rng = SplitRng(seed).split(3);

  std::vector<double> scales(cfg.blocks);
  for (double& s : scales)
    s = std::pow(1.0 - scale_rng.uniform01(), -cfg.exponent / 2.0);

  std::vector<double> abuf(cfg.rows_a * cfg.inner);
  for (std::size_t i = 0; i < cfg.rows_a; ++i)
    for (std::size_t j = 0; j < cfg.inner; ++j)
      abuf[i * cfg.inner + j] = scales[j / tau] * a_rng.gaussian();
  std::vector<double> bbuf(cfg.inner * cfg.cols_b);
  for (std::size_t i = 0; i < cfg.inner; ++i)
    for (std::size_t j = 0; j < cfg.cols_b; ++j)
      bbuf[i * cfg.cols_b + j] = scales[i / tau] * b_rng.gaussian();

  Instance inst;
  inst.a = DenseMatrix(cfg.rows_a, cfg.inner, std::move(abuf));
  inst.b = DenseMatrix(cfg.inner, cfg.cols_b, std::move(bbuf));
  inst.norm_product = squared_frobenius_norm(inst.a) * squared_frobenius_norm(inst.b);
  return inst;
}

// Spread of the realized sampling distribution, max Pi / min positive Pi.
inline double pi_spread(const SamplingDistribution& dist) {
  double lo = 0.0, hi = 0.0;
  for (double p : dist.pi) {
    if (p <= 0.0) continue;
    if (lo == 0.0 || p < lo) lo = p;
    hi = std::max(hi, p);
  }
  if (lo == 0.0) throw Error(errc::degenerate_distribution, "empty support");
  return hi / lo;
}

// Squared-error comparison of norm-proportional vs uniform sampling across a
// sweep of compression factors rho = K / t.  Each trial generates a fresh
// instance and draws one plan per arm; rows aggregate mean and sample
// variance of ||AB - estimate||_F^2 over the trials.
struct VarianceExperimentConfig {
  InstanceConfig instance;
  std::vector<std::size_t> compressions{2, 4, 8, 16};
  std::size_t trials = 10;
  std::uint64_t seed = 0;
};

struct VarianceRow {
  std::size_t rho = 0;
  std::size_t t = 0;
  double mean_sq_err_weighted = 0.0;
  double var_sq_err_weighted = 0.0;
  double mean_sq_err_uniform = 0.0;
  double var_sq_err_uniform = 0.0;
  double mean_draws_weighted = 0.0;
  double mean_draws_uniform = 0.0;
};

struct VarianceReport {
  VarianceExperimentConfig config;
  double mean_norm_product = 0.0;  // realized ||A||_F^2 ||B||_F^2, trial mean
  std::vector<VarianceRow> rows;
};

namespace detail {

struct RunningStats {
  double sum = 0.0;
  double sumsq = 0.0;
  std::size_t n = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return n == 0 ? 0.0 : sum / static_cast<double>(n); }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
  }
};

}  // namespace detail

inline VarianceReport run_variance_experiment(const VarianceExperimentConfig& cfg) {
  if (cfg.trials == 0) throw Error(errc::bad_config, "at least one trial required");
  if (cfg.compressions.empty()) throw Error(errc::bad_config, "empty compression sweep");
  for (std::size_t rho : cfg.compressions) {
    if (rho == 0 || cfg.instance.blocks % rho != 0) {
      throw Error(errc::indivisible,
                  "compression " + std::to_string(rho) + " does not divide the block count " +
                      std::to_string(cfg.instance.blocks));
    }
  }

  VarianceReport report;
  report.config = cfg;
  report.rows.resize(cfg.compressions.size());
  std::vector<detail::RunningStats> werr(cfg.compressions.size());
  std::vector<detail::RunningStats> uerr(cfg.compressions.size());
  std::vector<detail::RunningStats> wdraws(cfg.compressions.size());
  std::vector<detail::RunningStats> udraws(cfg.compressions.size());
  detail::RunningStats norms;

  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    SplitRng trial_rng = SplitRng(cfg.seed).split(trial + 1);
    const Instance inst = gen_instance(cfg.instance, trial_rng.seed());
    norms.add(inst.norm_product);
    const BlockPartition pa(inst.a, cfg.instance.blocks, BlockAxis::columns);
    const BlockPartition pb(inst.b, cfg.instance.blocks, BlockAxis::rows);
    const DenseMatrix exact = matmul(inst.a, inst.b);
    const SamplingDistribution opt = compute_distribution(pa, pb);
    const SamplingDistribution unif = uniform_distribution(cfg.instance.blocks);

    for (std::size_t r = 0; r < cfg.compressions.size(); ++r) {
      const std::size_t t = cfg.instance.blocks / cfg.compressions[r];
      const SamplingPlan wplan =
          draw_until_distinct(opt, t, trial_rng.split(2 * r + 1).seed());
      const SamplingPlan uplan =
          draw_until_distinct(unif, t, trial_rng.split(2 * r + 2).seed());
      const DenseMatrix west = estimate_product(build_weighted_sketch(pa, pb, wplan));
      const DenseMatrix uest = estimate_product(build_weighted_sketch(pa, pb, uplan));
      const double we = frobenius_distance(exact, west);
      const double ue = frobenius_distance(exact, uest);
      werr[r].add(we * we);
      uerr[r].add(ue * ue);
      wdraws[r].add(static_cast<double>(wplan.total_draws()));
      udraws[r].add(static_cast<double>(uplan.total_draws()));
    }
  }

  report.mean_norm_product = norms.mean();
  for (std::size_t r = 0; r < cfg.compressions.size(); ++r) {
    VarianceRow& row = report.rows[r];
    row.rho = cfg.compressions[r];
    row.t = cfg.instance.blocks / row.rho;
    row.mean_sq_err_weighted = werr[r].mean();
    row.var_sq_err_weighted = werr[r].variance();
    row.mean_sq_err_uniform = uerr[r].mean();
    row.var_sq_err_uniform = uerr[r].variance();
    row.mean_draws_weighted = wdraws[r].mean();
    row.mean_draws_uniform = udraws[r].mean();
  }
  return report;
}

// Stable CSV schema, one row per compression factor.
inline void write_variance_csv(const VarianceReport& report, std::ostream& out) {
  out << "rho,t,mean_sq_err_weighted,var_sq_err_weighted,mean_sq_err_uniform,"
         "var_sq_err_uniform,mean_draws_weighted,mean_draws_uniform\n";
  char buf[512];
  for (const VarianceRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.rho,
                  r.t, r.mean_sq_err_weighted, r.var_sq_err_weighted, r.mean_sq_err_uniform,
                  r.var_sq_err_uniform, r.mean_draws_weighted, r.mean_draws_uniform);
    out << buf;
  }
}

// One coded job under stragglers, compressed scheme against the exact rho = 1
// baseline on the same worker trace.
struct StragglerExperimentConfig {
  InstanceConfig instance;
  std::size_t workers = 0;          // n
  std::size_t base_stragglers = 0;  // s of the uncompressed scheme
  std::size_t compression = 1;      // rho
  std::string codec = "gc";         // "gc" or "matdot"
  std::string trace_path;           // empty: synthesize below
  double trace_shift = 1.0;
  double trace_rate = 0.5;
  std::uint64_t seed = 0;
};

struct StragglerArm {
  std::size_t threshold = 0;  // responses needed
  double completion_time = 0.0;
  double rel_error = 0.0;
  std::size_t distinct_blocks = 0;
  std::size_t total_draws = 0;
};

struct StragglerReport {
  StragglerExperimentConfig config;
  double norm_product = 0.0;
  std::size_t tolerated = 0;  // stragglers survived by the compressed arm
  StragglerArm baseline;
  StragglerArm compressed;
  double time_ratio = 0.0;  // compressed / baseline completion time
  double speedup = 0.0;     // baseline / compressed completion time
};

inline StragglerReport run_straggler_experiment(const StragglerExperimentConfig& cfg) {
  if (cfg.codec != "gc" && cfg.codec != "matdot") {
    throw Error(errc::bad_config, "codec must be \"gc\" or \"matdot\"");
  }
  if (cfg.compression == 0 || cfg.instance.blocks % cfg.compression != 0) {
    throw Error(errc::indivisible,
                "compression " + std::to_string(cfg.compression) +
                    " does not divide the block count " +
                    std::to_string(cfg.instance.blocks));
  }
  if (cfg.codec == "gc" && cfg.instance.blocks != cfg.workers) {
    throw Error(errc::bad_config,
                "the exact baseline assigns one block per worker; block count " +
                    std::to_string(cfg.instance.blocks) + " must equal the worker count " +
                    std::to_string(cfg.workers));
  }

  const WorkerTrace trace =
      cfg.trace_path.empty()
          ? synth_trace(cfg.workers, cfg.trace_shift, cfg.trace_rate,
                        SplitRng(cfg.seed).split(11).seed())
          : load_trace(cfg.trace_path);
  if (trace.workers() != cfg.workers) {
    throw Error(errc::bad_config,
                "trace covers " + std::to_string(trace.workers()) + " workers, config says " +
                    std::to_string(cfg.workers));
  }

  const Instance inst = gen_instance(cfg.instance, SplitRng(cfg.seed).split(12).seed());
  const BlockPartition pa(inst.a, cfg.instance.blocks, BlockAxis::columns);
  const BlockPartition pb(inst.b, cfg.instance.blocks, BlockAxis::rows);
  const DenseMatrix exact = matmul(inst.a, inst.b);
  const SamplingPlan base_plan = enumeration_plan(cfg.instance.blocks);
  const std::size_t t_compressed = cfg.instance.blocks / cfg.compression;
  const SamplingPlan comp_plan =
      cfg.compression == 1
          ? base_plan
          : draw_until_distinct(compute_distribution(pa, pb), t_compressed,
                                SplitRng(cfg.seed).split(13).seed());

  StragglerReport report;
  report.config = cfg;
  report.norm_product = inst.norm_product;

  SimOutcome base_run, comp_run;
  if (cfg.codec == "gc") {
    const GcScheme base = build_gc_scheme(cfg.workers, cfg.base_stragglers);
    const GcScheme comp = compressed_tolerance(base, cfg.compression);
    report.tolerated = comp.stragglers;
    base_run = simulate(base, trace, base_plan, pa, pb, exact);
    comp_run = simulate(comp, trace, comp_plan, pa, pb, exact);
  } else {
    const MatDotCode base = make_matdot_code(cfg.instance.blocks, cfg.workers);
    const MatDotCode comp = make_matdot_code(t_compressed, cfg.workers);
    report.tolerated = cfg.workers - comp.recovery_threshold();
    base_run = simulate(base, trace, base_plan, pa, pb, exact);
    comp_run = simulate(comp, trace, comp_plan, pa, pb, exact);
  }

  report.baseline = StragglerArm{base_run.responders.size(), base_run.completion_time,
                                 base_run.rel_error, base_plan.t(), base_plan.total_draws()};
  report.compressed =
      StragglerArm{comp_run.responders.size(), comp_run.completion_time, comp_run.rel_error,
                   comp_plan.t(), comp_plan.total_draws()};
  report.time_ratio = speedup_report(comp_run, base_run);
  report.speedup = report.time_ratio == 0.0 ? 0.0 : 1.0 / report.time_ratio;
  return report;
}

}  // namespace crmm
