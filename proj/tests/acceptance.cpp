// Acceptance harness: ten numbered end-to-end checks, one [PASS]/[FAIL] line
// each, exit status = number of failures.  Every tolerance and every runtime
// budget is pinned here in code; the checks regenerate all reference values
// from first principles (serial oracles, closed forms, order statistics).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crmm/crmm.hpp"
#include "support.hpp"

namespace {

using crmm::BlockAxis;
using crmm::BlockPartition;
using crmm::DenseMatrix;
using crmm_test::first_combination;
using crmm_test::gaussian_matrix;
using crmm_test::next_combination;
using crmm_test::rel_distance;
using crmm_test::skewed_matrix;
using crmm_test::weighted_oracle;

struct CheckFailure : std::runtime_error {
  explicit CheckFailure(const std::string& what) : std::runtime_error(what) {}
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Weighted and per-draw sketches give the same estimate on every plan.

std::string criterion_1() {
  constexpr double kTol = 1e-12;  // relative Frobenius distance
  double worst = 0.0;
  std::size_t repeated_plans = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const std::size_t blocks = 2 + (seed * 7) % 31;  // 2..32
    const std::size_t t = 1 + seed % blocks;         // 1..blocks
    const std::size_t inner = 2 * blocks;
    // Alternate uniform-norm and skewed instances: the skewed ones force
    // repeated draws, the interesting case for the weighted form.
    const DenseMatrix a =
        seed % 2 == 0 ? gaussian_matrix(6, inner, seed)
                      : skewed_matrix(6, inner, blocks, BlockAxis::columns, seed);
    const DenseMatrix b =
        seed % 2 == 0 ? gaussian_matrix(inner, 5, seed + 5000)
                      : skewed_matrix(inner, 5, blocks, BlockAxis::rows, seed + 5000);
    const BlockPartition pa(a, blocks, BlockAxis::columns);
    const BlockPartition pb(b, blocks, BlockAxis::rows);
    const crmm::SamplingPlan plan =
        crmm::draw_until_distinct(crmm::compute_distribution(pa, pb), t, seed);
    if (plan.total_draws() > plan.t()) ++repeated_plans;
    const DenseMatrix per_draw =
        crmm::estimate_product(crmm::build_unweighted_sketch(pa, pb, plan));
    const DenseMatrix weighted =
        crmm::estimate_product(crmm::build_weighted_sketch(pa, pb, plan));
    const double rel = rel_distance(weighted, per_draw);
    worst = std::max(worst, rel);
    require(rel <= kTol, "plan seed " + std::to_string(seed) + " diverges: rel " + fmt(rel));
  }
  require(repeated_plans > 100, "too few plans with repeated draws to be meaningful");
  return "1000 plans, worst rel " + fmt(worst) + ", " +
         std::to_string(repeated_plans) + " with repeats";
}

// ---------------------------------------------------------------------------
// 2 & 3. Monte Carlo over one fixed instance: the estimator mean matches the
// exact product entrywise, and its mean squared error obeys the 1/t bound.
// The instance has equal block norms, the regime where the
// sample-until-t-distinct stopping rule is exactly unbiased (see the decision
// ledger for the skewed-distribution caveat).

struct McResult {
  std::size_t entries = 0;
  std::size_t entries_within_band = 0;
  double worst_z = 0.0;          // |mean - exact| / SE, maximized over entries
  double mean_sq_err = 0.0;      // Monte Carlo mean of ||AB - Y||_F^2
  double variance_bound = 0.0;   // ||A||_F^2 ||B||_F^2 / t
};

const McResult& monte_carlo() {
  static const McResult result = [] {
    constexpr std::size_t kTrials = 10000;
    constexpr std::size_t kBlocks = 8;
    constexpr std::size_t kTau = 2;
    constexpr std::size_t kDistinct = 4;
    constexpr std::uint64_t kSeed = 2026;

    // Fixed small instance with every block normalized to unit Frobenius
    // norm on both sides, making the sampling distribution exactly uniform.
    crmm::InstanceConfig cfg;
    cfg.rows_a = 8;
    cfg.inner = kBlocks * kTau;
    cfg.cols_b = 8;
    cfg.blocks = kBlocks;
    cfg.exponent = 0.0;
    const crmm::Instance raw = crmm::gen_instance(cfg, kSeed);
    std::vector<double> abuf(raw.a.data());
    std::vector<double> bbuf(raw.b.data());
    {
      const BlockPartition pa(raw.a, kBlocks, BlockAxis::columns);
      const BlockPartition pb(raw.b, kBlocks, BlockAxis::rows);
      for (std::size_t l = 0; l < kBlocks; ++l) {
        const double na = pa.block_norm(l);
        const double nb = pb.block_norm(l);
        for (std::size_t i = 0; i < cfg.rows_a; ++i)
          for (std::size_t j = 0; j < kTau; ++j)
            abuf[i * cfg.inner + l * kTau + j] /= na;
        for (std::size_t i = 0; i < kTau; ++i)
          for (std::size_t j = 0; j < cfg.cols_b; ++j)
            bbuf[(l * kTau + i) * cfg.cols_b + j] /= nb;
      }
    }
    const DenseMatrix a(cfg.rows_a, cfg.inner, std::move(abuf));
    const DenseMatrix b(cfg.inner, cfg.cols_b, std::move(bbuf));
    const BlockPartition pa(a, kBlocks, BlockAxis::columns);
    const BlockPartition pb(b, kBlocks, BlockAxis::rows);
    const DenseMatrix exact = crmm::matmul(a, b);
    const crmm::SamplingDistribution dist = crmm::compute_distribution(pa, pb);

    const std::size_t cells = exact.size();
    std::vector<double> sum(cells, 0.0), sumsq(cells, 0.0);
    double sq_err_total = 0.0;
    crmm::SplitRng seeds(kSeed);
    for (std::size_t trial = 0; trial < kTrials; ++trial) {
      const crmm::SamplingPlan plan = crmm::draw_until_distinct(
          dist, kDistinct, seeds.split(trial + 1).seed());
      const DenseMatrix y =
          crmm::estimate_product(crmm::build_weighted_sketch(pa, pb, plan));
      for (std::size_t k = 0; k < cells; ++k) {
        const double v = y.data()[k];
        sum[k] += v;
        sumsq[k] += v * v;
      }
      const double err = crmm::frobenius_distance(exact, y);
      sq_err_total += err * err;
    }

    McResult r;
    r.entries = cells;
    const double n = static_cast<double>(kTrials);
    for (std::size_t k = 0; k < cells; ++k) {
      const double mean = sum[k] / n;
      const double var = (sumsq[k] - n * mean * mean) / (n - 1.0);
      const double se = std::sqrt(var / n);
      const double z = std::abs(mean - exact.data()[k]) / se;
      r.worst_z = std::max(r.worst_z, z);
      if (z <= 3.0) ++r.entries_within_band;
    }
    r.mean_sq_err = sq_err_total / n;
    r.variance_bound = crmm::squared_frobenius_norm(a) *
                       crmm::squared_frobenius_norm(b) /
                       static_cast<double>(kDistinct);
    return r;
  }();
  return result;
}

std::string criterion_2() {
  constexpr double kMinFraction = 0.99;  // entries within 3 standard errors
  const McResult& mc = monte_carlo();
  const double fraction =
      static_cast<double>(mc.entries_within_band) / static_cast<double>(mc.entries);
  require(fraction >= kMinFraction,
          "only " + std::to_string(mc.entries_within_band) + "/" +
              std::to_string(mc.entries) + " entries within 3 SE (worst z " +
              fmt(mc.worst_z) + ")");
  return std::to_string(mc.entries_within_band) + "/" + std::to_string(mc.entries) +
         " entries within 3 SE over 10000 trials, worst z " + fmt(mc.worst_z);
}

std::string criterion_3() {
  const McResult& mc = monte_carlo();
  require(mc.mean_sq_err <= mc.variance_bound,
          "mean squared error " + fmt(mc.mean_sq_err) + " exceeds bound " +
              fmt(mc.variance_bound));
  return "mean squared error " + fmt(mc.mean_sq_err) + " within bound " +
         fmt(mc.variance_bound);
}

// ---------------------------------------------------------------------------
// 4. The norm-proportional distribution minimizes the variance functional and
// attains the closed form (sum of norm products)^2.

std::string criterion_4() {
  constexpr double kRelTol = 1e-10;
  double worst_gap = 0.0;  // how close any random q came to the optimum
  for (std::uint64_t inst = 1; inst <= 20; ++inst) {
    const std::size_t blocks = 4 + inst % 13;  // 4..16
    const std::size_t inner = 2 * blocks;
    const DenseMatrix a = inst % 2 == 0
                              ? gaussian_matrix(6, inner, 900 + inst)
                              : skewed_matrix(6, inner, blocks, BlockAxis::columns, 900 + inst);
    const DenseMatrix b = inst % 2 == 0
                              ? gaussian_matrix(inner, 7, 950 + inst)
                              : skewed_matrix(inner, 7, blocks, BlockAxis::rows, 950 + inst);
    const BlockPartition pa(a, blocks, BlockAxis::columns);
    const BlockPartition pb(b, blocks, BlockAxis::rows);

    const crmm::SamplingDistribution opt = crmm::compute_distribution(pa, pb);
    const double f_opt = crmm::variance_functional(pa, pb, opt.pi);
    const double closed = crmm::optimal_variance_functional(pa, pb);
    require(std::abs(f_opt - closed) <= kRelTol * closed,
            "instance " + std::to_string(inst) + ": functional at the optimum " +
                fmt(f_opt) + " misses the closed form " + fmt(closed));

    crmm::SplitRng rng(7000 + inst);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> q(blocks);
      double total = 0.0;
      for (double& v : q) {
        v = rng.exponential(1.0);
        total += v;
      }
      for (double& v : q) v /= total;
      const double f_q = crmm::variance_functional(pa, pb, q);
      require(f_opt <= f_q * (1.0 + kRelTol),
              "instance " + std::to_string(inst) + " trial " + std::to_string(trial) +
                  ": random q beats the optimum: " + fmt(f_q) + " < " + fmt(f_opt));
      worst_gap = std::max(worst_gap, f_opt / f_q);
    }
  }
  return "20 instances x 1000 probability vectors, closest challenger at " +
         fmt(worst_gap * 100.0) + "% of optimal";
}

// ---------------------------------------------------------------------------
// 5. Replication coding: every minimal responder set recovers the serial
// weighted block sum exactly (n=6, s=2, all 15 sets).

std::string criterion_5() {
  constexpr double kTol = 1e-10;
  const DenseMatrix a = skewed_matrix(6, 12, 6, BlockAxis::columns, 1001);
  const DenseMatrix b = skewed_matrix(12, 5, 6, BlockAxis::rows, 1002);
  const BlockPartition pa(a, 6, BlockAxis::columns);
  const BlockPartition pb(b, 6, BlockAxis::rows);
  const crmm::SamplingPlan plan = crmm::draw_until_distinct(
      crmm::compute_distribution(pa, pb), 6, 1003);
  const DenseMatrix oracle = weighted_oracle(pa, pb, plan);

  const crmm::GcScheme scheme = crmm::build_gc_scheme(6, 2);
  const crmm::GcEncoding enc = crmm::encode_tasks(scheme, plan, pa, pb);
  std::vector<DenseMatrix> partials(scheme.workers);
  for (std::size_t i = 0; i < scheme.workers; ++i)
    partials[i] = crmm::worker_compute(enc, i);

  double worst = 0.0;
  std::size_t sets = 0;
  std::vector<std::size_t> responders = first_combination(4);
  do {
    const double rel =
        rel_distance(crmm::gc_decode(scheme, responders, partials), oracle);
    worst = std::max(worst, rel);
    require(rel <= kTol, "responder set #" + std::to_string(sets) +
                             " decodes with rel error " + fmt(rel));
    ++sets;
  } while (next_combination(responders, 6));
  require(sets == 15, "expected 15 responder sets, saw " + std::to_string(sets));
  return "all 15 responder sets decode, worst rel " + fmt(worst);
}

// ---------------------------------------------------------------------------
// 6. Compression/tolerance trade: n=8, s=1, rho=2 tolerates every 3-straggler
// set and provably not every 4-straggler set.

std::string criterion_6() {
  constexpr double kTol = 1e-10;
  const DenseMatrix a = skewed_matrix(6, 16, 8, BlockAxis::columns, 1101);
  const DenseMatrix b = skewed_matrix(16, 5, 8, BlockAxis::rows, 1102);
  const BlockPartition pa(a, 8, BlockAxis::columns);
  const BlockPartition pb(b, 8, BlockAxis::rows);
  const crmm::SamplingPlan plan = crmm::draw_until_distinct(
      crmm::compute_distribution(pa, pb), 4, 1103);
  const DenseMatrix oracle = weighted_oracle(pa, pb, plan);

  const crmm::GcScheme scheme =
      crmm::compressed_tolerance(crmm::build_gc_scheme(8, 1), 2);
  require(scheme.stragglers == 3, "tolerance should be rho(s+1)-1 = 3");
  const crmm::GcEncoding enc = crmm::encode_tasks(scheme, plan, pa, pb);
  std::vector<DenseMatrix> partials(scheme.workers);
  for (std::size_t i = 0; i < scheme.workers; ++i)
    partials[i] = crmm::worker_compute(enc, i);

  const auto complement = [](const std::vector<std::size_t>& gone, std::size_t n) {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < n; ++i)
      if (std::find(gone.begin(), gone.end(), i) == gone.end()) live.push_back(i);
    return live;
  };

  // Every straggler set of size s' = 3 must decode.
  std::size_t tolerated = 0;
  std::vector<std::size_t> gone = first_combination(3);
  do {
    const std::vector<std::size_t> live = complement(gone, 8);
    const double rel = rel_distance(crmm::gc_decode(scheme, live, partials), oracle);
    require(rel <= kTol, "3-straggler set decodes with rel error " + fmt(rel));
    ++tolerated;
  } while (next_combination(gone, 8));
  require(tolerated == 56, "expected C(8,3)=56 sets, saw " + std::to_string(tolerated));

  // At least one straggler set of size 4 defeats the scheme.
  std::size_t fatal = 0;
  gone = first_combination(4);
  do {
    try {
      crmm::decoding_vector(scheme, complement(gone, 8));
    } catch (const crmm::Error&) {
      ++fatal;
    }
  } while (next_combination(gone, 8));
  require(fatal >= 1, "every 4-straggler set decoded; tightness not witnessed");
  return "all 56 3-straggler sets tolerated; " + std::to_string(fatal) +
         "/70 4-straggler sets fatal";
}

// ---------------------------------------------------------------------------
// 7. Polynomial codec: t=3 over n=9 workers decodes from every 5-subset.

std::string criterion_7() {
  constexpr double kTol = 1e-9;
  const DenseMatrix a = skewed_matrix(6, 12, 6, BlockAxis::columns, 1201);
  const DenseMatrix b = skewed_matrix(12, 5, 6, BlockAxis::rows, 1202);
  const BlockPartition pa(a, 6, BlockAxis::columns);
  const BlockPartition pb(b, 6, BlockAxis::rows);
  const crmm::SamplingPlan plan = crmm::draw_until_distinct(
      crmm::compute_distribution(pa, pb), 3, 1203);
  const DenseMatrix oracle = weighted_oracle(pa, pb, plan);

  const crmm::MatDotCode code = crmm::make_matdot_code(3, 9);
  std::vector<crmm::MatDotResponse> all;
  for (const crmm::MatDotWorkerInput& in : crmm::matdot_encode(code, plan, pa, pb))
    all.push_back(crmm::matdot_worker_multiply(in));

  double worst = 0.0;
  std::size_t sets = 0;
  std::vector<std::size_t> pick = first_combination(5);
  do {
    std::vector<crmm::MatDotResponse> subset;
    for (std::size_t i : pick) subset.push_back(all[i]);
    const double rel = rel_distance(crmm::matdot_decode(code, subset), oracle);
    worst = std::max(worst, rel);
    require(rel <= kTol, "responder subset #" + std::to_string(sets) +
                             " decodes with rel error " + fmt(rel));
    ++sets;
  } while (next_combination(pick, 9));
  require(sets == 126, "expected C(9,5)=126 subsets, saw " + std::to_string(sets));

  bool refused = false;
  try {
    crmm::matdot_decode(code, {all[0], all[2], all[4], all[6]});
  } catch (const crmm::Error& e) {
    refused = std::string(e.code()) == crmm::errc::below_threshold;
  }
  require(refused, "decode accepted 4 responses below the threshold 5");
  return "all 126 subsets decode, worst rel " + fmt(worst) + "; 4 responses refused";
}

// ---------------------------------------------------------------------------
// 8. Compressed polynomial threshold: formula for every divisor pair up to
// t = 64, decode from exactly threshold-many responses, refusal below it.

std::string criterion_8() {
  // The decode solves a real polynomial-evaluation system whose condition
  // number grows like (1+sqrt(2))^(2b-2) in the compressed block count b, so
  // the accuracy that double precision can certify degrades with b; past
  // b ~ 12 no numerical agreement is certifiable at all and only the
  // structural claim (accepts exactly threshold responses, refuses fewer,
  // finite output) remains.  Bands pinned from a 200-seed worst-case sweep.
  constexpr double kExactBand = 1e-9;      // b <= 6   (measured <= 1.2e-10)
  constexpr std::size_t kExactBlocks = 6;
  constexpr double kDriftBand = 1e-5;      // b <= 9   (measured <= 8.8e-7)
  constexpr std::size_t kDriftBlocks = 9;
  std::size_t pairs = 0;
  for (std::size_t t = 1; t <= 64; ++t) {
    for (std::size_t rho = 1; rho <= t; ++rho) {
      if (t % rho != 0) continue;
      require(crmm::compressed_threshold(t, rho) == 2 * (t / rho) - 1,
              "threshold formula fails at t=" + std::to_string(t) +
                  ", rho=" + std::to_string(rho));
      ++pairs;
    }
  }

  // Decode behavior depends only on the compressed block count t/rho, which
  // covers every value 1..64 across the divisor pairs above.
  double worst_exact = 0.0, worst_drift = 0.0;
  for (std::size_t tb = 1; tb <= 64; ++tb) {
    const std::size_t threshold = 2 * tb - 1;
    const crmm::MatDotCode code = crmm::make_matdot_code(tb, threshold + 2);
    crmm::SplitRng rng(1300 + tb);
    std::vector<DenseMatrix> ab, bb;
    std::vector<std::uint64_t> w;
    double serial = 0.0, mass = 0.0;  // mass: cancellation-free denominator
    for (std::size_t j = 0; j < tb; ++j) {
      const double av = rng.gaussian();
      const double bv = rng.gaussian();
      const std::uint64_t wv = 1 + j % 3;
      ab.push_back(DenseMatrix(1, 1, {av}));
      bb.push_back(DenseMatrix(1, 1, {bv}));
      w.push_back(wv);
      serial += static_cast<double>(wv) * av * bv;
      mass += static_cast<double>(wv) * std::abs(av * bv);
    }
    std::vector<crmm::MatDotResponse> all;
    for (const crmm::MatDotWorkerInput& in : crmm::matdot_encode_blocks(code, ab, bb, w))
      all.push_back(crmm::matdot_worker_multiply(in));

    // Exactly threshold-many responses: drop two distinct workers.
    const std::size_t skip_a = 1;
    const std::size_t skip_b = all.size() - 2 == skip_a ? all.size() - 1 : all.size() - 2;
    std::vector<crmm::MatDotResponse> subset;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (i == skip_a || i == skip_b) continue;
      subset.push_back(all[i]);
    }
    require(subset.size() == threshold, "subset construction is wrong");
    const DenseMatrix decoded = crmm::matdot_decode(code, subset);
    require(std::isfinite(decoded(0, 0)),
            "decode not finite at t/rho=" + std::to_string(tb));
    const double rel = std::abs(decoded(0, 0) - serial) / mass;
    if (tb <= kExactBlocks) {
      worst_exact = std::max(worst_exact, rel);
      require(rel <= kExactBand, "t/rho=" + std::to_string(tb) +
                                     " decodes with rel error " + fmt(rel));
    } else if (tb <= kDriftBlocks) {
      worst_drift = std::max(worst_drift, rel);
      require(rel <= kDriftBand, "t/rho=" + std::to_string(tb) +
                                     " decodes with rel error " + fmt(rel));
    }

    // One response fewer must be refused.
    bool refused = false;
    try {
      std::vector<crmm::MatDotResponse> short_set(subset.begin(), subset.end() - 1);
      crmm::matdot_decode(code, short_set);
    } catch (const crmm::Error& e) {
      refused = std::string(e.code()) == crmm::errc::below_threshold;
    }
    require(refused, "decode accepted " + std::to_string(threshold - 1) +
                         " responses at t/rho=" + std::to_string(tb));
  }
  return std::to_string(pairs) + " divisor pairs; exact-threshold decode for "
         "t/rho=1..64, refusal one below; rel " + fmt(worst_exact) +
         " through 6 blocks, " + fmt(worst_drift) + " through 9";
}

// ---------------------------------------------------------------------------
// 9. Bench-scale sampling comparison: the norm-proportional arm must match or
// beat uniform sampling at every compression factor.

std::string criterion_9() {
  crmm::VarianceExperimentConfig cfg;
  cfg.instance.rows_a = 64;
  cfg.instance.inner = 960;
  cfg.instance.cols_b = 64;
  cfg.instance.blocks = 96;
  cfg.instance.exponent = 2.0;
  cfg.compressions = {2, 4, 8, 16};
  cfg.trials = 10;
  cfg.seed = 1;
  const crmm::VarianceReport report = crmm::run_variance_experiment(cfg);

  std::ostringstream evidence;
  evidence << "uniform/weighted error ratios:";
  for (const crmm::VarianceRow& row : report.rows) {
    require(row.mean_sq_err_weighted <= row.mean_sq_err_uniform,
            "rho=" + std::to_string(row.rho) + ": weighted " +
                fmt(row.mean_sq_err_weighted) + " > uniform " +
                fmt(row.mean_sq_err_uniform));
    evidence << " rho" << row.rho << "="
             << fmt(row.mean_sq_err_uniform / row.mean_sq_err_weighted);
  }
  return evidence.str();
}

// ---------------------------------------------------------------------------
// 10. Bench-scale straggler run: 500 workers, tolerance 399 after
// compression, decode from the 101 fastest, completion = 101st order
// statistic, relative error inside the plausibility band.

std::string criterion_10() {
  constexpr double kRelLo = 1e-9;
  constexpr double kRelHi = 1e-3;
  crmm::StragglerExperimentConfig cfg;
  cfg.instance.rows_a = 40;
  cfg.instance.inner = 2000;
  cfg.instance.cols_b = 40;
  cfg.instance.blocks = 500;
  cfg.instance.exponent = 3.0;
  cfg.workers = 500;
  cfg.base_stragglers = 19;
  cfg.compression = 20;
  cfg.codec = "gc";
  cfg.trace_shift = 1.0;
  cfg.trace_rate = 0.5;
  cfg.seed = 1;
  const crmm::StragglerReport report = crmm::run_straggler_experiment(cfg);

  require(report.tolerated == 399, "tolerance should be 20*20-1 = 399, got " +
                                       std::to_string(report.tolerated));
  require(report.compressed.threshold == 101,
          "decode should need 101 responses, needed " +
              std::to_string(report.compressed.threshold));

  // Completion time must be the 101st order statistic of the shared trace.
  const crmm::WorkerTrace trace = crmm::synth_trace(
      cfg.workers, cfg.trace_shift, cfg.trace_rate,
      crmm::SplitRng(cfg.seed).split(11).seed());
  std::vector<double> sorted = trace.times;
  std::sort(sorted.begin(), sorted.end());
  require(report.compressed.completion_time == sorted[100],
          "completion " + fmt(report.compressed.completion_time) +
              " is not the 101st order statistic " + fmt(sorted[100]));

  require(report.compressed.rel_error >= kRelLo &&
              report.compressed.rel_error <= kRelHi,
          "relative error " + fmt(report.compressed.rel_error) +
              " outside [1e-9, 1e-3]");
  require(report.baseline.rel_error < 1e-18,
          "exact baseline should carry no sampling error");
  return "decoded from 101/500 responses, rel error " +
         fmt(report.compressed.rel_error) + ", completion ratio vs exact " +
         fmt(report.time_ratio);
}

// ---------------------------------------------------------------------------

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<std::string()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "weighted sketch equals per-draw sketch", 10, criterion_1},
      {2, "Monte Carlo mean matches the exact product", 30, criterion_2},
      {3, "mean squared error obeys the 1/t bound", 30, criterion_3},
      {4, "norm-proportional sampling minimizes the variance functional", 5, criterion_4},
      {5, "replication decode equals the serial weighted sum (all 15 sets)", 5, criterion_5},
      {6, "compression buys tolerance 3, not 4 (exhaustive)", 10, criterion_6},
      {7, "polynomial decode from every 5-of-9 subset", 10, criterion_7},
      {8, "compressed threshold 2(t/rho)-1 with exact-threshold decode", 10, criterion_8},
      {9, "bench run: weighted beats uniform at every compression", 60, criterion_9},
      {10, "bench run: 500-worker trace, decode at the 101st arrival", 60, criterion_10},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string evidence;
    std::string failure;
    try {
      evidence = c.run();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && seconds > c.budget_seconds) {
      failure = "exceeded the " + fmt(c.budget_seconds) + " s budget (" +
                fmt(seconds) + " s)";
    }
    if (failure.empty()) {
      std::cout << "[PASS] " << c.id << ". " << c.name << " — " << evidence << " ("
                << fmt(seconds) << " s)\n";
    } else {
      ++failures;
      std::cout << "[FAIL] " << c.id << ". " << c.name << " — " << failure << " ("
                << fmt(seconds) << " s)\n";
    }
  }
  if (failures != 0) {
    std::cout << failures << " criterion(s) failed\n";
  }
  return failures;
}
