#include "safescout/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safescout {

namespace {

std::vector<double> current_estimates(const std::vector<CellStatistics>& stats) {
  std::vector<double> estimates(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) estimates[i] = stats[i].estimate();
  return estimates;
}

void validate_inputs(const EnvironmentSpec& env, const TrustOracle& oracle,
                     const LearnerConfig& config) {
  const auto violations = validate(env);
  if (!violations.empty())
    throw std::invalid_argument("invalid environment: " + violations.front());
  if (oracle.cell_count() != env.cell_count())
    throw std::invalid_argument("oracle cell count does not match environment");
  if (config.initial_cell && *config.initial_cell >= env.cell_count())
    throw std::invalid_argument("initial cell out of range");
  if (config.policy.n_max == 0 || config.policy.n_delta == 0)
    throw std::invalid_argument("n_max and n_delta must be positive");
  if (!(config.policy.delta > 0.0 && config.policy.delta < 1.0))
    throw std::invalid_argument("delta must be in (0,1)");
}

}  // namespace

std::uint64_t default_iteration_cap(std::size_t m, const PolicyConfig& policy) {
  return static_cast<std::uint64_t>(m) * (policy.n_max + policy.n_delta + 2) * 10;
}

RunLog run(const EnvironmentSpec& env, TrustOracle& oracle, const LearnerConfig& config) {
  validate_inputs(env, oracle, config);
  const std::size_t m = env.cell_count();
  const std::uint64_t cap =
      config.max_iterations > 0 ? config.max_iterations : default_iteration_cap(m, config.policy);
  const std::size_t window = static_cast<std::size_t>(config.policy.n_delta) + 1;

  Rng rng(config.seed);
  std::size_t current = config.initial_cell ? *config.initial_cell : rng.uniform_index(m);

  std::vector<CellStatistics> stats(m);
  std::vector<std::size_t> active(m);
  for (std::size_t i = 0; i < m; ++i) active[i] = i;

  RunLog log;
  log.final_cells.assign(m, std::nullopt);

  std::uint64_t n = 1;
  for (;;) {
    if (n > cap) {
      log.terminated = Termination::iteration_cap;
      return log;
    }

    const int y = oracle.observe(current);
    stats[current].consecutive_stay += 1;
    record_observation(stats[current], y, window);

    StepRecord step;
    step.iteration = n;
    step.cell = current;
    step.observation = y;
    step.estimate = stats[current].estimate();

    const EliminationDecision decision = check_elimination(stats[current], config.policy);
    if (decision.eliminate) {
      active.erase(std::find(active.begin(), active.end(), current));
      stats[current].eliminated_at = n;
      stats[current].frozen_c = c_measure(stats[current].estimate());
      log.final_cells[current] = CellFinal{n, stats[current].visits, stats[current].estimate(),
                                           *stats[current].frozen_c};
      step.elimination = EliminationEvent{current, decision.reason};
    }
    log.steps.push_back(step);

    if (active.empty()) {
      log.terminated = Termination::active_set_empty;
      return log;
    }

    const std::vector<double> estimates = current_estimates(stats);
    const std::size_t next = select_next(active, estimates, config.policy, rng);
    if (next != current) stats[next].consecutive_stay = 0;
    current = next;
    n += 1;
  }
}

ReplayReport replay(const RunLog& log, const EnvironmentSpec& env, const LearnerConfig& config) {
  const std::size_t m = env.cell_count();
  const std::size_t window = static_cast<std::size_t>(config.policy.n_delta) + 1;

  if (log.steps.empty()) throw std::invalid_argument("replay: empty log");
  if (log.final_cells.size() != m) throw std::invalid_argument("replay: final block wrong size");
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    if (log.steps[i].iteration != i + 1)
      throw std::invalid_argument("replay: iterations not contiguous from 1");
    if (log.steps[i].cell >= m) throw std::invalid_argument("replay: cell index out of range");
  }
  std::size_t eliminations = 0;
  for (const auto& step : log.steps)
    if (step.elimination) eliminations += 1;
  if (log.terminated == Termination::active_set_empty && eliminations != m)
    throw std::invalid_argument("replay: log truncated (missing eliminations)");
  if (!log.steps.back().elimination && log.terminated == Termination::active_set_empty)
    throw std::invalid_argument("replay: log truncated (no terminal elimination)");

  std::vector<CellStatistics> stats(m);
  std::vector<std::size_t> active(m);
  for (std::size_t i = 0; i < m; ++i) active[i] = i;

  auto diverged = [](std::uint64_t n, std::string why) {
    return ReplayReport{false, n, std::move(why)};
  };

  std::size_t prev_cell = log.steps.front().cell;
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const StepRecord& step = log.steps[i];

    if (i > 0) {
      // The logged move must be one the selection rule could have made.
      const std::vector<double> estimates = current_estimates(stats);
      const std::vector<double> dist = distribution_form(active, estimates, config.policy);
      if (dist[step.cell] == 0.0)
        return diverged(step.iteration, "logged cell not in policy support");
    }

    stats[step.cell].consecutive_stay = (i > 0 && step.cell != prev_cell)
                                            ? 1
                                            : stats[step.cell].consecutive_stay + 1;
    record_observation(stats[step.cell], step.observation, window);

    if (std::abs(stats[step.cell].estimate() - step.estimate) > 1e-9)
      return diverged(step.iteration, "logged estimate does not match recomputation");

    const EliminationDecision decision = check_elimination(stats[step.cell], config.policy);
    if (decision.eliminate != step.elimination.has_value())
      return diverged(step.iteration, "elimination decision does not match recomputation");
    if (decision.eliminate) {
      if (step.elimination->cell != step.cell)
        throw std::invalid_argument("replay: elimination event names a different cell");
      if (step.elimination->reason != decision.reason)
        return diverged(step.iteration, "elimination reason does not match recomputation");
      const auto it = std::find(active.begin(), active.end(), step.cell);
      if (it == active.end())
        throw std::invalid_argument("replay: elimination of an inactive cell");
      active.erase(it);
      const auto& final = log.final_cells[step.cell];
      if (!final) throw std::invalid_argument("replay: eliminated cell missing from final block");
      if (final->n_k != step.iteration ||
          std::abs(final->p_final - stats[step.cell].estimate()) > 1e-9 ||
          std::abs(final->c_k - c_measure(stats[step.cell].estimate())) > 1e-9)
        return diverged(step.iteration, "final block does not match elimination state");
    }
    prev_cell = step.cell;
  }

  return ReplayReport{};
}

}  // namespace safescout
