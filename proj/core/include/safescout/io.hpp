#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "safescout/classifier.hpp"
#include "safescout/environment.hpp"
#include "safescout/learner.hpp"
#include "safescout/ldp.hpp"
#include "safescout/markov.hpp"

namespace safescout {

// Invalid or inconsistent input documents. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reals in JSON/CSV bodies are written with 12 significant digits (15 for
// matrix dumps). Both formats re-parse to the value that produced them, so
// serialize -> parse -> serialize is byte-stable.
std::string format_real(double v);
std::string format_real_hi(double v);

// ---------------------------------------------------------------------------
// Experiment configuration (single JSON document; cells 1-based in files)

struct ExperimentConfig {
  EnvironmentSpec environment;
  LearnerConfig learner;
  int replications = 1;
  std::string output_dir = "out";
};

// `base_dir` anchors a relative environment-file reference.
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir = ".");
std::string serialize_experiment_config(const ExperimentConfig& config);

std::string serialize_environment(const EnvironmentSpec& env);
EnvironmentSpec parse_environment(const std::string& json_text);

// The built-in preset: the 9-cell reference experiment shipped as
// presets/table1.preset.
ExperimentConfig table1_preset();

// ---------------------------------------------------------------------------
// Run logs (JSON lines: one step record per iteration, then a final record)

std::string serialize_run_log(const RunLog& log);
RunLog parse_run_log(const std::string& text);

// ---------------------------------------------------------------------------
// Tables

std::string rate_curve_csv(const RateCurve& curve);

// Row-major CSV, one row per line, 15 significant digits.
std::string matrix_csv(const Matrix& matrix);

// Policy table as 2m x m CSV: rows (cell 1..m, obs=1) then (cell 1..m, obs=0).
PolicyTable parse_policy_csv(const std::string& text);
std::string policy_csv(const PolicyTable& policy);

// Whitespace/comma-separated reals.
std::vector<double> parse_real_list(const std::string& text);
std::string vector_csv(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Classification documents

struct CellMeasure {
  std::size_t cell = 0;  // 0-based in memory
  double c = 0.0;
  double p = 0.0;
};

// CSV with header "cell,c,p"; cell ids are 1-based and must be a permutation
// of 1..m.
std::vector<CellMeasure> parse_cell_measures_csv(const std::string& text);

std::string serialize_classification(const ClassificationResult& result,
                                     std::span<const double> c_values,
                                     std::span<const double> estimates);

// ---------------------------------------------------------------------------
// Experiment report

struct CellOutcome {
  std::size_t cell = 0;  // 0-based
  std::uint64_t visits = 0;
  std::optional<std::uint64_t> n_k;
  std::optional<double> p_final;
  std::optional<double> c_k;
  std::optional<bool> safe;  // unset when the run hit the iteration cap
};

struct ReplicationSummary {
  int index = 0;
  std::uint64_t oracle_seed = 0;
  std::uint64_t policy_seed = 0;
  Termination terminated = Termination::active_set_empty;
  std::uint64_t iterations = 0;
  std::vector<CellOutcome> cells;
  std::optional<double> c_threshold;
  std::optional<ThresholdRoute> route;
  std::optional<std::size_t> k_star;
  std::vector<std::size_t> safe_set;  // 0-based
  std::uint64_t unsafe_visits = 0;    // visits to cells unsafe under the true parameters
};

struct AggregateStats {
  int runs = 0;
  bool all_terminated = false;
  std::vector<double> safe_frequency;          // per cell, over completed runs
  std::vector<std::size_t> modal_safe_set;     // most frequent safe set, 0-based
  double modal_safe_set_frequency = 0.0;
  double error_q50 = 0.0;  // quantiles of |p_final - p_true| over (run, cell)
  double error_q90 = 0.0;
  double error_max = 0.0;
};

struct ExperimentReport {
  std::vector<ReplicationSummary> replications;
  AggregateStats aggregate;
};

std::string serialize_report(const ExperimentReport& report);
ExperimentReport parse_report(const std::string& json_text);

}  // namespace safescout
