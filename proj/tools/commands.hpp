#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apelt/cost_model.hpp"
#include "apelt/metrics.hpp"
#include "apelt/segmentation.hpp"
#include "apelt/simulation.hpp"
#include "apelt/timeseries.hpp"

namespace apelt::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;   // unreadable or malformed input
inline constexpr int kExitConfig = 3;  // invalid or infeasible configuration

enum class Command { Detect, Simulate, Benchmark };
enum class Method { Op, Pelt, ApeltFixed, ApeltPlugin, ApeltProfile, ApeltH };
enum class VarianceEstimator { LocalRegression, Mad };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::Detect;
  std::string input;
  bool header = false;
  std::string output;

  Method method = Method::ApeltFixed;
  std::optional<CostFamily> cost;  // unset: chosen from method / protocol
  std::optional<Theta> theta0;
  std::optional<double> penalty_normal;
  std::optional<double> penalty_epidemic;
  std::optional<double> penalty_uniform;
  std::optional<std::size_t> min_seg_len;
  VarianceEstimator variance_estimator = VarianceEstimator::LocalRegression;
  std::size_t variance_window = 10;  // half-width h
  std::size_t plugin_window = 10;
  std::size_t profile_starts = 1;

  std::uint64_t seed = 1;
  std::size_t reps = 100;
  std::size_t threads = 1;
  Protocol protocol = Protocol::EpidemicMean;
  std::size_t n = 1000;
  std::size_t m = 9;
  Scenario scenario = Scenario::A;
  std::size_t epidemic_length = 10;
  double delta = 2.5;
  std::size_t match_tolerance = 10;
};

std::string to_string(Method method);
Method parse_method(const std::string& name);
std::string to_string(CostFamily family);
CostFamily parse_cost(const std::string& name);
Protocol parse_protocol(const std::string& name);
std::string to_string(Protocol protocol);

/// Cost family the run will use after method and protocol defaults.
CostFamily resolve_cost(const RunConfig& config);

/// Throws ConfigError for method/cost/penalty combinations that cannot run.
void validate(const RunConfig& config);

/// Reads one value per line; blank lines are ignored, the first line is
/// skipped when `header` is set. Throws InputError naming the bad line.
std::vector<double> read_values(std::istream& in, bool header);

struct Detection {
  Segmentation segmentation;
  CostModel cost;
  PenaltySpec penalty;
  std::optional<Theta> theta;
  double seconds = 0.0;  // wall-clock of the segmentation call only
};

/// Runs the configured method on `ts`.
Detection detect(const TimeSeries& ts, const RunConfig& config);

/// Writes the key=value result document of a detection.
void write_detection(std::ostream& out, const RunConfig& config, const Detection& det);

/// Scores one replication according to the protocol.
EvalReport evaluate(const Detection& det, const LabeledSequence& truth, const RunConfig& config);

struct BenchmarkRow {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::size_t m_hat = 0;
  EvalReport report;
  double seconds = 0.0;
};

std::vector<BenchmarkRow> run_benchmark(const RunConfig& config);

/// Per-replication CSV (no timing columns, so identical configs give
/// identical bytes).
void write_benchmark_rows(std::ostream& out, const RunConfig& config,
                          const std::vector<BenchmarkRow>& rows);
/// One aggregate CSV row of field-wise means plus mean detection time.
void write_benchmark_summary(std::ostream& out, const RunConfig& config,
                             const std::vector<BenchmarkRow>& rows);

int cmd_detect(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_benchmark(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the subcommand.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace apelt::cli
