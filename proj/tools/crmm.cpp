// Command-line harness: instance generation, sketching, the two benchmark
// experiments, and single simulated coded runs.  Errors leave on stderr as
// {"error": {"code", "message"}} with a nonzero exit code.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crmm/crmm.hpp"
#include "crmm/serialize.hpp"

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

crmm::DenseMatrix load_any(const std::string& path) {
  return has_suffix(path, ".csv") ? crmm::load_matrix_csv(path) : crmm::load_matrix(path);
}

void save_any(const crmm::DenseMatrix& m, const std::string& path) {
  if (has_suffix(path, ".csv")) {
    crmm::save_matrix_csv(m, path);
  } else {
    crmm::save_matrix(m, path);
  }
}

template <typename Cfg>
void apply_config_file(const std::string& path, Cfg& cfg) {
  std::ifstream in(path);
  if (!in) throw crmm::Error(crmm::errc::io_error, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
    cfg = j.get<Cfg>();
  } catch (const nlohmann::json::exception& e) {
    throw crmm::Error(crmm::errc::bad_format, path + ": " + e.what());
  }
}

void emit(const nlohmann::json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw crmm::Error(crmm::errc::io_error, "cannot write " + out);
  f << j.dump(2) << "\n";
}

struct InstanceFlags {
  CLI::Option* rows_a = nullptr;
  CLI::Option* inner = nullptr;
  CLI::Option* cols_b = nullptr;
  CLI::Option* blocks = nullptr;
  CLI::Option* exponent = nullptr;
  crmm::InstanceConfig value;

  void attach(CLI::App* cmd) {
    rows_a = cmd->add_option("--rows-a", value.rows_a, "Rows of the left factor");
    inner = cmd->add_option("--inner", value.inner, "Shared inner dimension");
    cols_b = cmd->add_option("--cols-b", value.cols_b, "Columns of the right factor");
    blocks = cmd->add_option("--blocks", value.blocks, "Block count along the inner dimension");
    exponent = cmd->add_option("--exponent", value.exponent,
                               "Per-block scale skew; 0 = uniform block norms");
  }

  void apply(crmm::InstanceConfig& cfg) const {
    if (rows_a->count()) cfg.rows_a = value.rows_a;
    if (inner->count()) cfg.inner = value.inner;
    if (cols_b->count()) cfg.cols_b = value.cols_b;
    if (blocks->count()) cfg.blocks = value.blocks;
    if (exponent->count()) cfg.exponent = value.exponent;
  }
};

constexpr uint64_t kDefaultSeed = 1;

crmm::VarianceExperimentConfig desk_variance_config() {
  crmm::VarianceExperimentConfig cfg;
  cfg.instance = crmm::InstanceConfig{64, 960, 64, 96, 2.0};
  cfg.compressions = {2, 4, 8, 16};
  cfg.trials = 10;
  cfg.seed = kDefaultSeed;
  return cfg;
}

crmm::VarianceExperimentConfig full_variance_config() {
  crmm::VarianceExperimentConfig cfg = desk_variance_config();
  cfg.instance = crmm::InstanceConfig{260, 9600, 280, 480, 2.0};
  return cfg;
}

crmm::StragglerExperimentConfig desk_straggler_config() {
  crmm::StragglerExperimentConfig cfg;
  cfg.instance = crmm::InstanceConfig{40, 2000, 40, 500, 3.0};
  cfg.workers = 500;
  cfg.base_stragglers = 19;
  cfg.compression = 20;
  cfg.codec = "gc";
  cfg.trace_shift = 1.0;
  cfg.trace_rate = 0.5;
  cfg.seed = kDefaultSeed;
  return cfg;
}

crmm::StragglerExperimentConfig full_straggler_config() {
  crmm::StragglerExperimentConfig cfg = desk_straggler_config();
  cfg.instance = crmm::InstanceConfig{100, 10000, 100, 500, 3.0};
  return cfg;
}

void run_gen(const crmm::InstanceConfig& cfg, uint64_t seed, const std::string& out_a,
             const std::string& out_b) {
  const crmm::Instance inst = crmm::gen_instance(cfg, seed);
  save_any(inst.a, out_a);
  save_any(inst.b, out_b);
  const crmm::BlockPartition pa(inst.a, cfg.blocks, crmm::BlockAxis::columns);
  const crmm::BlockPartition pb(inst.b, cfg.blocks, crmm::BlockAxis::rows);
  nlohmann::json j{{"config", cfg},
                   {"seed", seed},
                   {"norm_product", inst.norm_product},
                   {"pi_spread", crmm::pi_spread(crmm::compute_distribution(pa, pb))},
                   {"out_a", out_a},
                   {"out_b", out_b}};
  std::cout << j.dump(2) << "\n";
}

struct SketchArgs {
  std::string a_path, b_path;
  std::size_t blocks = 0;
  std::size_t distinct = 0;
  std::size_t fixed_draws = 0;
  bool uniform = false;
  bool unweighted = false;
  uint64_t seed = kDefaultSeed;
  std::string out_c, out_r, plan_out, estimate_out;
};

void run_sketch(const SketchArgs& args) {
  if ((args.distinct == 0) == (args.fixed_draws == 0)) {
    throw crmm::Error(crmm::errc::bad_config,
                      "choose exactly one stopping rule: --distinct or --fixed-draws");
  }
  const crmm::DenseMatrix a = load_any(args.a_path);
  const crmm::DenseMatrix b = load_any(args.b_path);
  const crmm::BlockPartition pa(a, args.blocks, crmm::BlockAxis::columns);
  const crmm::BlockPartition pb(b, args.blocks, crmm::BlockAxis::rows);
  const crmm::SamplingDistribution dist =
      args.uniform ? crmm::uniform_distribution(args.blocks) : crmm::compute_distribution(pa, pb);
  const crmm::SamplingPlan plan =
      args.distinct > 0 ? crmm::draw_until_distinct(dist, args.distinct, args.seed)
                        : crmm::draw_fixed_count(dist, args.fixed_draws, args.seed);
  const crmm::SketchPair sketch = args.unweighted
                                      ? crmm::build_unweighted_sketch(pa, pb, plan)
                                      : crmm::build_weighted_sketch(pa, pb, plan);
  if (!args.out_c.empty()) save_any(sketch.c, args.out_c);
  if (!args.out_r.empty()) save_any(sketch.r, args.out_r);
  if (!args.estimate_out.empty()) save_any(crmm::estimate_product(sketch), args.estimate_out);
  if (!args.plan_out.empty()) emit(nlohmann::json(plan), args.plan_out);
  nlohmann::json j{{"distinct", plan.t()},
                   {"draws", plan.total_draws()},
                   {"storage_ratio", crmm::storage_ratio(plan.sample)},
                   {"kind", args.unweighted ? "unweighted" : "weighted"},
                   {"sampling", args.uniform ? "uniform" : "norm_proportional"},
                   {"c_shape", {sketch.c.rows(), sketch.c.cols()}},
                   {"r_shape", {sketch.r.rows(), sketch.r.cols()}}};
  std::cout << j.dump(2) << "\n";
}

struct SimulateArgs {
  std::string a_path, b_path;
  crmm::StragglerExperimentConfig cfg = desk_straggler_config();
};

void run_simulate(const SimulateArgs& args, const std::string& out) {
  const crmm::StragglerExperimentConfig& cfg = args.cfg;
  crmm::DenseMatrix a, b;
  if (!args.a_path.empty() || !args.b_path.empty()) {
    if (args.a_path.empty() || args.b_path.empty()) {
      throw crmm::Error(crmm::errc::bad_config, "--a and --b must be given together");
    }
    a = load_any(args.a_path);
    b = load_any(args.b_path);
  } else {
    crmm::Instance inst =
        crmm::gen_instance(cfg.instance, crmm::SplitRng(cfg.seed).split(12).seed());
    a = std::move(inst.a);
    b = std::move(inst.b);
  }
  const crmm::BlockPartition pa(a, cfg.instance.blocks, crmm::BlockAxis::columns);
  const crmm::BlockPartition pb(b, cfg.instance.blocks, crmm::BlockAxis::rows);
  const crmm::DenseMatrix exact = crmm::matmul(a, b);
  const crmm::WorkerTrace trace =
      cfg.trace_path.empty()
          ? crmm::synth_trace(cfg.workers, cfg.trace_shift, cfg.trace_rate,
                              crmm::SplitRng(cfg.seed).split(11).seed())
          : crmm::load_trace(cfg.trace_path);
  if (cfg.compression == 0 || cfg.instance.blocks % cfg.compression != 0) {
    throw crmm::Error(crmm::errc::indivisible, "compression must divide the block count");
  }
  const std::size_t t = cfg.instance.blocks / cfg.compression;
  const crmm::SamplingPlan plan =
      t == cfg.instance.blocks
          ? crmm::enumeration_plan(cfg.instance.blocks)
          : crmm::draw_until_distinct(crmm::compute_distribution(pa, pb), t,
                                      crmm::SplitRng(cfg.seed).split(13).seed());

  nlohmann::json j;
  crmm::SimOutcome outcome;
  if (cfg.codec == "gc") {
    if (cfg.instance.blocks != cfg.workers) {
      throw crmm::Error(crmm::errc::bad_config,
                        "the scheme assigns one block per worker; --blocks must equal --workers");
    }
    const crmm::GcScheme scheme = crmm::compressed_tolerance(
        crmm::build_gc_scheme(cfg.workers, cfg.base_stragglers), cfg.compression);
    outcome = crmm::simulate(scheme, trace, plan, pa, pb, exact);
    j["scheme"] = scheme;
  } else if (cfg.codec == "matdot") {
    const crmm::MatDotCode code = crmm::make_matdot_code(t, cfg.workers);
    outcome = crmm::simulate(code, trace, plan, pa, pb, exact);
    j["scheme"] = code;
  } else {
    throw crmm::Error(crmm::errc::bad_config, "codec must be \"gc\" or \"matdot\"");
  }
  j["plan"] = {{"distinct", plan.t()}, {"draws", plan.total_draws()}};
  j["outcome"] = outcome;
  emit(j, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-sampled approximate matrix products with straggler-tolerant coding"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random block-scaled instance");
  InstanceFlags gen_inst;
  gen_inst.attach(gen);
  gen_inst.value = crmm::InstanceConfig{64, 960, 64, 96, 2.0};
  uint64_t gen_seed = kDefaultSeed;
  std::string gen_out_a = "A.crmm", gen_out_b = "B.crmm";
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out-a", gen_out_a, "Left factor path (.csv for text)");
  gen->add_option("--out-b", gen_out_b, "Right factor path (.csv for text)");
  gen->callback([&] { run_gen(gen_inst.value, gen_seed, gen_out_a, gen_out_b); });

  // sketch
  auto* sketch = app.add_subcommand("sketch", "Sample blocks and build a sketch pair");
  SketchArgs sargs;
  sketch->add_option("--a", sargs.a_path, "Left factor file")->required();
  sketch->add_option("--b", sargs.b_path, "Right factor file")->required();
  sketch->add_option("--blocks", sargs.blocks, "Block count")->required();
  sketch->add_option("--distinct", sargs.distinct, "Sample until this many distinct blocks");
  sketch->add_option("--fixed-draws", sargs.fixed_draws, "Sample exactly this many draws");
  sketch->add_flag("--uniform", sargs.uniform, "Uniform sampling instead of norm-proportional");
  sketch->add_flag("--unweighted", sargs.unweighted, "Keep one sketch column block per draw");
  sketch->add_option("--seed", sargs.seed, "Sampling seed");
  sketch->add_option("--out-c", sargs.out_c, "Write the column sketch here");
  sketch->add_option("--out-r", sargs.out_r, "Write the row sketch here");
  sketch->add_option("--plan-out", sargs.plan_out, "Write the sampling plan JSON here");
  sketch->add_option("--estimate-out", sargs.estimate_out, "Write the product estimate here");
  sketch->callback([&] { run_sketch(sargs); });

  // variance-exp
  auto* vexp = app.add_subcommand("variance-exp",
                                  "Weighted vs uniform sampling error across compressions");
  std::string vconfig, vout, vjson_out;
  bool vfull = false;
  InstanceFlags vinst;
  vinst.attach(vexp);
  std::vector<std::size_t> vrhos;
  std::size_t vtrials = 0;
  uint64_t vseed = 0;
  vexp->add_option("--config", vconfig, "JSON config file");
  vexp->add_flag("--full-scale", vfull, "Large preset (minutes, not seconds)");
  auto* vrhos_opt = vexp->add_option("--rhos", vrhos, "Compression sweep");
  auto* vtrials_opt = vexp->add_option("--trials", vtrials, "Trials per compression");
  auto* vseed_opt = vexp->add_option("--seed", vseed, "Experiment seed");
  vexp->add_option("--out", vout, "CSV output path (default stdout)");
  vexp->add_option("--json-out", vjson_out, "Full report JSON path");
  vexp->callback([&] {
    crmm::VarianceExperimentConfig cfg = vfull ? full_variance_config() : desk_variance_config();
    if (!vconfig.empty()) apply_config_file(vconfig, cfg);
    vinst.apply(cfg.instance);
    if (vrhos_opt->count()) cfg.compressions = vrhos;
    if (vtrials_opt->count()) cfg.trials = vtrials;
    if (vseed_opt->count()) cfg.seed = vseed;
    const crmm::VarianceReport report = crmm::run_variance_experiment(cfg);
    if (vout.empty() || vout == "-") {
      crmm::write_variance_csv(report, std::cout);
    } else {
      std::ofstream f(vout);
      if (!f) throw crmm::Error(crmm::errc::io_error, "cannot write " + vout);
      crmm::write_variance_csv(report, f);
    }
    if (!vjson_out.empty()) emit(nlohmann::json(report), vjson_out);
  });

  // straggler-exp
  auto* sexp = app.add_subcommand("straggler-exp",
                                  "Compressed coded run vs exact baseline on one trace");
  std::string sconfig, sout;
  bool sfull = false;
  InstanceFlags sinst;
  sinst.attach(sexp);
  std::size_t sworkers = 0, sstrag = 0, srho = 0;
  std::string scodec, strace;
  double sshift = 0.0, srate = 0.0;
  uint64_t sseed = 0;
  sexp->add_option("--config", sconfig, "JSON config file");
  sexp->add_flag("--full-scale", sfull, "Large preset");
  auto* sworkers_opt = sexp->add_option("--workers", sworkers, "Worker count n");
  auto* sstrag_opt = sexp->add_option("--stragglers", sstrag, "Base straggler tolerance s");
  auto* srho_opt = sexp->add_option("--rho", srho, "Compression factor");
  auto* scodec_opt = sexp->add_option("--codec", scodec, "gc or matdot");
  auto* strace_opt = sexp->add_option("--trace", strace, "Worker completion-time CSV");
  auto* sshift_opt = sexp->add_option("--shift", sshift, "Synthetic trace shift");
  auto* srate_opt = sexp->add_option("--rate", srate, "Synthetic trace rate");
  auto* sseed_opt = sexp->add_option("--seed", sseed, "Experiment seed");
  sexp->add_option("--out", sout, "Report JSON path (default stdout)");
  sexp->callback([&] {
    crmm::StragglerExperimentConfig cfg =
        sfull ? full_straggler_config() : desk_straggler_config();
    if (!sconfig.empty()) apply_config_file(sconfig, cfg);
    sinst.apply(cfg.instance);
    if (sworkers_opt->count()) cfg.workers = sworkers;
    if (sstrag_opt->count()) cfg.base_stragglers = sstrag;
    if (srho_opt->count()) cfg.compression = srho;
    if (scodec_opt->count()) cfg.codec = scodec;
    if (strace_opt->count()) cfg.trace_path = strace;
    if (sshift_opt->count()) cfg.trace_shift = sshift;
    if (srate_opt->count()) cfg.trace_rate = srate;
    if (sseed_opt->count()) cfg.seed = sseed;
    emit(nlohmann::json(crmm::run_straggler_experiment(cfg)), sout);
  });

  // simulate
  auto* sim = app.add_subcommand("simulate", "One coded run on a trace");
  SimulateArgs simargs;
  std::string simconfig, simout;
  InstanceFlags siminst;
  siminst.attach(sim);
  std::size_t simworkers = 0, simstrag = 0, simrho = 0;
  std::string simcodec, simtrace;
  double simshift = 0.0, simrate = 0.0;
  uint64_t simseed = 0;
  sim->add_option("--config", simconfig, "JSON config file");
  sim->add_option("--a", simargs.a_path, "Left factor file (otherwise generated)");
  sim->add_option("--b", simargs.b_path, "Right factor file");
  auto* simworkers_opt = sim->add_option("--workers", simworkers, "Worker count n");
  auto* simstrag_opt = sim->add_option("--stragglers", simstrag, "Base straggler tolerance s");
  auto* simrho_opt = sim->add_option("--rho", simrho, "Compression factor");
  auto* simcodec_opt = sim->add_option("--codec", simcodec, "gc or matdot");
  auto* simtrace_opt = sim->add_option("--trace", simtrace, "Worker completion-time CSV");
  auto* simshift_opt = sim->add_option("--shift", simshift, "Synthetic trace shift");
  auto* simrate_opt = sim->add_option("--rate", simrate, "Synthetic trace rate");
  auto* simseed_opt = sim->add_option("--seed", simseed, "Run seed");
  sim->add_option("--out", simout, "Outcome JSON path (default stdout)");
  sim->callback([&] {
    if (!simconfig.empty()) apply_config_file(simconfig, simargs.cfg);
    siminst.apply(simargs.cfg.instance);
    if (simworkers_opt->count()) simargs.cfg.workers = simworkers;
    if (simstrag_opt->count()) simargs.cfg.base_stragglers = simstrag;
    if (simrho_opt->count()) simargs.cfg.compression = simrho;
    if (simcodec_opt->count()) simargs.cfg.codec = simcodec;
    if (simtrace_opt->count()) simargs.cfg.trace_path = simtrace;
    if (simshift_opt->count()) simargs.cfg.trace_shift = simshift;
    if (simrate_opt->count()) simargs.cfg.trace_rate = simrate;
    if (simseed_opt->count()) simargs.cfg.seed = simseed;
    run_simulate(simargs, simout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << crmm::error_json("bad_config", e.what()).dump() << "\n";
    return 1;
  } catch (const crmm::Error& e) {
    std::cerr << crmm::error_json(e).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << crmm::error_json("internal", e.what()).dump() << "\n";
    return 1;
  }
  return 0;
}
