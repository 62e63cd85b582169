#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "irs/channel.hpp"
#include "irs/metrics.hpp"

namespace irs {

enum class Mode { Convergence, SweepSr, SweepN, SweepM, Single };
enum class Method { Sdr, Sca, RandomPhase, NoIrs };

const char* to_string(Mode m);
const char* to_string(Method m);
Mode parse_mode(const std::string& s);      // throws InvalidInput
Method parse_method(const std::string& s);  // throws InvalidInput

struct ExperimentSpec {
  Mode mode = Mode::Single;
  std::vector<Method> methods{Method::Sdr, Method::Sca, Method::RandomPhase, Method::NoIrs};
  std::vector<double> sweep_values;  // empty: mode default
  int seeds = 50;
  ScenarioConfig base;
  std::string out_dir = "out";
  bool dump_solutions = false;
  bool timing = true;  // false writes 0 seconds so output bytes are reproducible
  int threads = 0;     // 0: hardware concurrency
  bool verbose = false;

  /// Sweep values after applying the mode default.
  std::vector<double> effective_sweep() const;
  /// Name of the swept quantity: "r0", "N", "M" or "none".
  std::string variable() const;
  void validate() const;
};

struct ResultRow {
  std::string method;
  std::uint64_t seed = 0;
  double sweep = 0;
  std::string variable = "none";
  double harvested_w = 0;
  double sr_bps_hz = 0;
  int iters = 0;
  double seconds = 0;
  SolveStatus status = SolveStatus::Failed;

  bool operator==(const ResultRow&) const = default;
};

struct SolutionRecord {
  std::string method;
  std::uint64_t seed = 0;
  double sweep = 0;
  ComplexVector w, u;  // physical w
};

struct TraceRecord {
  std::string method;
  std::uint64_t seed = 0;
  double sweep = 0;
  std::vector<double> trace;
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;  // sorted by (method, sweep, seed)
  std::vector<SolutionRecord> solutions;
  std::vector<TraceRecord> traces;
  bool all_ok = true;  // every run ended Converged or MaxIters
};

/// Scenario for one grid point: base with the swept variable set and seed
/// base.seed + seed_index.
ScenarioConfig point_config(const ExperimentSpec& spec, double sweep, int seed_index);

/// Runs one method on one scenario. Per-run failures become the status.
SolveResult run_method(Method method, const ScenarioConfig& cfg);

/// Runs every (method, sweep, seed) in a worker pool. Writes files into
/// spec.out_dir unless it is empty.
ExperimentOutput run_experiment(const ExperimentSpec& spec, std::ostream* log = nullptr);

struct ComplexityEntry {
  double sweep = 0;
  int elements = 0;
  int matched = 0;
  double median_sdr_seconds = 0, median_sca_seconds = 0;
  double ratio = 0;  // median over matched instances of sdr / sca time
  double median_sdr_iters = 0, median_sca_iters = 0;
};

struct ComplexitySummary {
  std::vector<ComplexityEntry> entries;
  std::string warning;
};

/// Matches sdr and sca rows by (seed, sweep); points with N = 0 are skipped.
/// `elements` is used when the sweep variable is not N.
ComplexitySummary compare_complexity(const std::vector<ResultRow>& rows, int elements);

double median(std::vector<double> x);

}  // namespace irs
