#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "safescout/environment.hpp"
#include "safescout/estimation.hpp"
#include "safescout/oracle.hpp"
#include "safescout/policy.hpp"

namespace safescout {

struct LearnerConfig {
  PolicyConfig policy;
  std::uint64_t seed = 42;               // drives initial-cell draw and tie-breaking
  std::uint64_t max_iterations = 0;      // 0 -> default cap m*(n_max + n_delta + 2)*10
  std::optional<std::size_t> initial_cell;  // default: uniform over cells
};

enum class Termination { active_set_empty, iteration_cap };

struct EliminationEvent {
  std::size_t cell = 0;
  EliminationReason reason = EliminationReason::none;
};

struct StepRecord {
  std::uint64_t iteration = 0;  // 1-based, strictly increasing
  std::size_t cell = 0;
  int observation = 0;
  double estimate = 0.0;  // the observed cell's estimate after this update
  std::optional<EliminationEvent> elimination;
};

struct CellFinal {
  std::uint64_t n_k = 0;    // iteration at which the cell was eliminated
  std::uint64_t visits = 0;
  double p_final = 0.0;     // estimate frozen at elimination
  double c_k = 0.0;         // p_final * (1 - p_final)
};

struct RunLog {
  std::vector<StepRecord> steps;
  std::vector<std::optional<CellFinal>> final_cells;  // empty optional if never eliminated
  Termination terminated = Termination::active_set_empty;

  std::uint64_t iterations() const { return steps.empty() ? 0 : steps.back().iteration; }
};

// One full learning run: observe at the current cell, update its statistics,
// apply the elimination conditions to it, then greedily select the next cell
// among the remaining active ones. The iteration counter advances only while
// active cells remain. Identical environment, oracle seed and config
// reproduce the log byte for byte.
RunLog run(const EnvironmentSpec& env, TrustOracle& oracle, const LearnerConfig& config);

std::uint64_t default_iteration_cap(std::size_t m, const PolicyConfig& policy);

// Re-derives every estimate and elimination decision from the logged
// observation bits and confirms each logged step is one the policy could
// have produced. Structural defects (truncation, bad indices, inconsistent
// final block) throw std::invalid_argument; semantic mismatches come back as
// a divergence report.
struct ReplayReport {
  bool ok = true;
  std::optional<std::uint64_t> divergence_iteration;
  std::string message;
};
ReplayReport replay(const RunLog& log, const EnvironmentSpec& env, const LearnerConfig& config);

}  // namespace safescout
