#include "safescout/policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace safescout {

namespace {

std::vector<std::size_t> tied_minimizers(std::span<const std::size_t> active,
                                         std::span<const double> estimates,
                                         double tie_tolerance) {
  if (active.empty()) throw std::invalid_argument("selection over empty active set");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t cell : active) {
    const double c = c_measure(estimates[cell]);
    if (c < best) best = c;
  }
  std::vector<std::size_t> ties;
  for (std::size_t cell : active) {
    if (c_measure(estimates[cell]) <= best + tie_tolerance) ties.push_back(cell);
  }
  return ties;
}

}  // namespace

std::size_t select_next(std::span<const std::size_t> active, std::span<const double> estimates,
                        const PolicyConfig& config, Rng& rng) {
  const std::vector<std::size_t> ties = tied_minimizers(active, estimates, config.tie_tolerance);
  if (ties.size() == 1) return ties.front();
  return ties[rng.uniform_index(ties.size())];
}

std::vector<double> distribution_form(std::span<const std::size_t> active,
                                      std::span<const double> estimates,
                                      const PolicyConfig& config) {
  const std::vector<std::size_t> ties = tied_minimizers(active, estimates, config.tie_tolerance);
  std::vector<double> dist(estimates.size(), 0.0);
  const double w = 1.0 / static_cast<double>(ties.size());
  for (std::size_t cell : ties) dist[cell] = w;
  return dist;
}

EliminationDecision check_elimination(const CellStatistics& stats, const PolicyConfig& config) {
  if (stats.consecutive_stay >= config.n_max)
    return {true, EliminationReason::consecutive_stay};

  if (stats.history.size() >= config.n_delta + 1) {
    const double current = stats.estimate();
    bool stable = true;
    for (double past : stats.history) {
      if (!(std::abs(past - current) < config.delta)) {
        stable = false;
        break;
      }
    }
    if (stable) return {true, EliminationReason::estimate_stable};
  }
  return {false, EliminationReason::none};
}

}  // namespace safescout
