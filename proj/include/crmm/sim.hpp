#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "crmm/error.hpp"
#include "crmm/gc.hpp"
#include "crmm/matdot.hpp"
#include "crmm/rng.hpp"

namespace crmm {

// Per-worker completion times.  All strictly positive and finite.
struct WorkerTrace {
  std::vector<double> times;

  std::size_t workers() const noexcept { return times.size(); }
};

inline WorkerTrace make_trace(std::vector<double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i])) {
      throw Error(errc::bad_format,
                  "trace entry " + std::to_string(i + 1) + " is not a positive duration");
    }
  }
  if (times.empty()) throw Error(errc::bad_format, "trace holds no workers");
  return WorkerTrace{std::move(times)};
}

// CSV trace: one duration per row; a single non-numeric first row is treated
// as a header.  Parse errors report the row number.
inline WorkerTrace read_trace(std::istream& in, const std::string& name = "trace") {
  std::vector<double> times;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(line, &used);
      while (used < line.size() && (line[used] == ' ' || line[used] == '\t')) ++used;
      if (used != line.size()) throw std::invalid_argument(line);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(errc::bad_format, name + " row " + std::to_string(lineno) +
                                          ": duration must be positive");
      }
      times.push_back(v);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      if (lineno == 1 && times.empty()) continue;  // header row
      throw Error(errc::bad_format,
                  name + " row " + std::to_string(lineno) + ": cannot parse \"" + line + "\"");
    }
  }
  if (times.empty()) throw Error(errc::bad_format, name + " holds no durations");
  return make_trace(std::move(times));
}

inline WorkerTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_error, "cannot open " + path);
  return read_trace(in, path);
}

// Synthetic shifted-exponential trace: shift + Exp(rate) per worker, i.i.d.
inline WorkerTrace synth_trace(std::size_t workers, double shift, double rate,
                               std::uint64_t seed) {
  if (workers == 0) throw Error(errc::bad_config, "no workers");
  if (!(shift >= 0.0) || !(rate > 0.0)) {
    throw Error(errc::bad_config, "need shift >= 0 and rate > 0");
  }
  SplitRng rng = SplitRng(seed).split(0x7261CE);
  std::vector<double> times(workers);
  for (double& t : times) t = shift + rng.exponential(rate);
  return WorkerTrace{std::move(times)};
}

// The f fastest workers (ties broken toward lower ids), ascending by id.
inline std::vector<std::size_t> fastest_workers(const WorkerTrace& trace, std::size_t f) {
  if (f == 0 || f > trace.workers()) {
    throw Error(errc::bad_config,
                "cannot take " + std::to_string(f) + " responders from " +
                    std::to_string(trace.workers()) + " workers");
  }
  std::vector<std::size_t> order(trace.workers());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return trace.times[l] < trace.times[r];
  });
  order.resize(f);
  std::sort(order.begin(), order.end());
  return order;
}

struct SimOutcome {
  std::vector<std::size_t> responders;  // ascending worker ids
  double completion_time = 0.0;         // f-th order statistic of the trace
  double rel_error = 0.0;               // ||AB - decoded||_F^2 / (||A||_F^2 ||B||_F^2)
  DenseMatrix decoded;
};

namespace detail {

inline SimOutcome finish_outcome(std::vector<std::size_t> responders,
                                 const WorkerTrace& trace, DenseMatrix decoded,
                                 const DenseMatrix& reference, double norm_product) {
  SimOutcome out;
  out.completion_time = 0.0;
  for (std::size_t i : responders)
    out.completion_time = std::max(out.completion_time, trace.times[i]);
  out.responders = std::move(responders);
  const double err = frobenius_distance(reference, decoded);
  out.rel_error = (err * err) / norm_product;
  out.decoded = std::move(decoded);
  return out;
}

}  // namespace detail

// Run one coded job against a trace: the responder set is the f fastest
// workers for the codec's recovery threshold f, only those workers' partial
// results are computed, and the decoded product is compared against the
// exact one.  The simulation adds no numerical noise of its own: the decoded
// matrix is bit-identical to decoding the same responder set directly.
inline SimOutcome simulate(const GcScheme& scheme, const WorkerTrace& trace,
                           const SamplingPlan& plan, const BlockPartition& a,
                           const BlockPartition& b, const DenseMatrix& reference) {
  if (trace.workers() != scheme.workers) {
    throw Error(errc::dimension_mismatch,
                "trace covers " + std::to_string(trace.workers()) + " workers, scheme has " +
                    std::to_string(scheme.workers));
  }
  const std::vector<std::size_t> responders =
      fastest_workers(trace, scheme.recovery_threshold());
  const GcEncoding enc = encode_tasks(scheme, plan, a, b);
  std::vector<DenseMatrix> partials(scheme.workers);
  for (std::size_t i : responders) partials[i] = worker_compute(enc, i);
  DenseMatrix decoded = gc_decode(scheme, responders, partials);
  const double norm_product =
      squared_frobenius_norm(a.matrix()) * squared_frobenius_norm(b.matrix());
  return detail::finish_outcome(responders, trace, std::move(decoded), reference, norm_product);
}

inline SimOutcome simulate(const MatDotCode& code, const WorkerTrace& trace,
                           const SamplingPlan& plan, const BlockPartition& a,
                           const BlockPartition& b, const DenseMatrix& reference) {
  if (trace.workers() != code.workers) {
    throw Error(errc::dimension_mismatch,
                "trace covers " + std::to_string(trace.workers()) + " workers, code has " +
                    std::to_string(code.workers));
  }
  const std::vector<std::size_t> responders =
      fastest_workers(trace, code.recovery_threshold());
  const std::vector<MatDotWorkerInput> inputs = matdot_encode(code, plan, a, b);
  std::vector<MatDotResponse> responses;
  for (std::size_t i : responders) responses.push_back(matdot_worker_multiply(inputs[i]));
  DenseMatrix decoded = matdot_decode(code, std::move(responses));
  const double norm_product =
      squared_frobenius_norm(a.matrix()) * squared_frobenius_norm(b.matrix());
  return detail::finish_outcome(responders, trace, std::move(decoded), reference, norm_product);
}

// Completion-time ratio approximate/exact on a shared trace; below one means
// the approximate scheme finished sooner.
inline double speedup_report(const SimOutcome& outcome, const SimOutcome& baseline) {
  return outcome.completion_time / baseline.completion_time;
}

}  // namespace crmm
