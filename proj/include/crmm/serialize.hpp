#pragma once

#include <string>

#include <json.hpp>

#include "crmm/error.hpp"
#include "crmm/experiment.hpp"
#include "crmm/gc.hpp"
#include "crmm/matdot.hpp"
#include "crmm/sampling.hpp"
#include "crmm/sim.hpp"

// JSON bindings for experiment provenance: plans, scheme descriptors, sim
// outcomes, and experiment configs/reports.  Scheme descriptors capture the
// structure (assignments, nodes, thresholds), not the raw coding matrix;
// rebuilding a scheme goes through its constructor.

namespace crmm {

inline void to_json(nlohmann::json& j, const SamplingPlan& plan) {
  j = nlohmann::json{{"pi", plan.dist.pi},
                     {"draws", plan.sample.draws},
                     {"distinct", plan.sample.distinct},
                     {"weights", plan.sample.weights},
                     {"seed", plan.seed}};
}

inline void from_json(const nlohmann::json& j, SamplingPlan& plan) {
  plan.dist.pi = j.at("pi").get<std::vector<double>>();
  plan.dist.support.clear();
  for (std::size_t l = 0; l < plan.dist.pi.size(); ++l)
    if (plan.dist.pi[l] > 0.0) plan.dist.support.push_back(l);
  plan.sample.draws = j.at("draws").get<std::vector<std::size_t>>();
  plan.sample.distinct = j.at("distinct").get<std::vector<std::size_t>>();
  plan.sample.weights = j.at("weights").get<std::vector<std::uint64_t>>();
  plan.seed = j.value("seed", std::uint64_t{0});
}

inline void to_json(nlohmann::json& j, const GcScheme& scheme) {
  j = nlohmann::json{
      {"workers", scheme.workers},
      {"stragglers", scheme.stragglers},
      {"blocks", scheme.blocks},
      {"compression", scheme.compression},
      {"kind", scheme.kind == GcKind::replica_groups ? "replica_groups" : "cyclic_classes"},
      {"recovery_threshold", scheme.recovery_threshold()},
  };
  if (scheme.kind == GcKind::replica_groups) {
    j["group_size"] = scheme.group_size;
  } else {
    j["class_size"] = scheme.class_size;
    j["window"] = scheme.window;
    j["nodes"] = scheme.nodes;
  }
  nlohmann::json assignments = nlohmann::json::array();
  for (std::size_t i = 0; i < scheme.workers; ++i)
    assignments.push_back(scheme.worker_support(i));
  j["assignments"] = std::move(assignments);
}

inline void to_json(nlohmann::json& j, const MatDotCode& code) {
  j = nlohmann::json{{"workers", code.workers},
                     {"blocks", code.blocks},
                     {"eval_points", code.nodes},
                     {"recovery_threshold", code.recovery_threshold()}};
}

inline void to_json(nlohmann::json& j, const SimOutcome& outcome) {
  j = nlohmann::json{{"responders", outcome.responders},
                     {"completion_time", outcome.completion_time},
                     {"rel_error", outcome.rel_error}};
}

inline void to_json(nlohmann::json& j, const InstanceConfig& cfg) {
  j = nlohmann::json{{"rows_a", cfg.rows_a},
                     {"inner", cfg.inner},
                     {"cols_b", cfg.cols_b},
                     {"blocks", cfg.blocks},
                     {"exponent", cfg.exponent}};
}

inline void from_json(const nlohmann::json& j, InstanceConfig& cfg) {
  cfg.rows_a = j.at("rows_a").get<std::size_t>();
  cfg.inner = j.at("inner").get<std::size_t>();
  cfg.cols_b = j.at("cols_b").get<std::size_t>();
  cfg.blocks = j.at("blocks").get<std::size_t>();
  cfg.exponent = j.value("exponent", 2.0);
}

inline void to_json(nlohmann::json& j, const VarianceExperimentConfig& cfg) {
  j = nlohmann::json{{"instance", cfg.instance},
                     {"compressions", cfg.compressions},
                     {"trials", cfg.trials},
                     {"seed", cfg.seed}};
}

inline void from_json(const nlohmann::json& j, VarianceExperimentConfig& cfg) {
  cfg.instance = j.at("instance").get<InstanceConfig>();
  cfg.compressions =
      j.value("compressions", std::vector<std::size_t>{2, 4, 8, 16});
  cfg.trials = j.value("trials", std::size_t{10});
  cfg.seed = j.value("seed", std::uint64_t{0});
}

inline void to_json(nlohmann::json& j, const VarianceRow& row) {
  j = nlohmann::json{{"rho", row.rho},
                     {"t", row.t},
                     {"mean_sq_err_weighted", row.mean_sq_err_weighted},
                     {"var_sq_err_weighted", row.var_sq_err_weighted},
                     {"mean_sq_err_uniform", row.mean_sq_err_uniform},
                     {"var_sq_err_uniform", row.var_sq_err_uniform},
                     {"mean_draws_weighted", row.mean_draws_weighted},
                     {"mean_draws_uniform", row.mean_draws_uniform}};
}

inline void to_json(nlohmann::json& j, const VarianceReport& report) {
  j = nlohmann::json{{"config", report.config},
                     {"mean_norm_product", report.mean_norm_product},
                     {"rows", report.rows}};
}

inline void to_json(nlohmann::json& j, const StragglerExperimentConfig& cfg) {
  j = nlohmann::json{{"instance", cfg.instance},
                     {"workers", cfg.workers},
                     {"base_stragglers", cfg.base_stragglers},
                     {"compression", cfg.compression},
                     {"codec", cfg.codec},
                     {"trace_path", cfg.trace_path},
                     {"trace_shift", cfg.trace_shift},
                     {"trace_rate", cfg.trace_rate},
                     {"seed", cfg.seed}};
}

inline void from_json(const nlohmann::json& j, StragglerExperimentConfig& cfg) {
  cfg.instance = j.at("instance").get<InstanceConfig>();
  cfg.workers = j.at("workers").get<std::size_t>();
  cfg.base_stragglers = j.at("base_stragglers").get<std::size_t>();
  cfg.compression = j.value("compression", std::size_t{1});
  cfg.codec = j.value("codec", std::string{"gc"});
  cfg.trace_path = j.value("trace_path", std::string{});
  cfg.trace_shift = j.value("trace_shift", 1.0);
  cfg.trace_rate = j.value("trace_rate", 0.5);
  cfg.seed = j.value("seed", std::uint64_t{0});
}

inline void to_json(nlohmann::json& j, const StragglerArm& arm) {
  j = nlohmann::json{{"threshold", arm.threshold},
                     {"completion_time", arm.completion_time},
                     {"rel_error", arm.rel_error},
                     {"distinct_blocks", arm.distinct_blocks},
                     {"total_draws", arm.total_draws}};
}

inline void to_json(nlohmann::json& j, const StragglerReport& report) {
  j = nlohmann::json{{"config", report.config},
                     {"norm_product", report.norm_product},
                     {"tolerated", report.tolerated},
                     {"baseline", report.baseline},
                     {"compressed", report.compressed},
                     {"time_ratio", report.time_ratio},
                     {"speedup", report.speedup}};
}

// Machine-readable error envelope used by the CLI.
inline nlohmann::json error_json(const std::string& code, const std::string& message) {
  return nlohmann::json{{"error", {{"code", code}, {"message", message}}}};
}

inline nlohmann::json error_json(const Error& e) { return error_json(e.code(), e.what()); }

}  // namespace crmm
