#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace safescout {

// Sufficient statistics for one cell. Estimates are kept as exact integer
// counts and evaluated on demand, so successes/visits never drifts from the
// stored ratio. `history` holds the estimate recorded at each of the cell's
// own visit instants, trimmed to the stability window; the window is indexed
// by visits to this cell, not by global iterations, because the estimate is
// constant between visits.
struct CellStatistics {
  std::uint64_t visits = 0;
  std::uint64_t successes = 0;
  std::vector<double> history;
  std::uint64_t consecutive_stay = 0;
  std::optional<std::uint64_t> eliminated_at;
  std::optional<double> frozen_c;

  // successes/visits, or the 0.5 prior before the first visit. The prior
  // maps to the maximal robustness measure (0.25), so unvisited cells are
  // only selected once visited candidates drop below it or run out.
  double estimate() const {
    return visits == 0 ? 0.5 : static_cast<double>(successes) / static_cast<double>(visits);
  }
};

// Per-cell estimates at one iteration, exported for the run log.
struct EstimateSnapshot {
  std::uint64_t iteration = 0;
  std::vector<double> estimates;
};

// Record one observation: bump counts and append the new estimate to the
// history window, keeping at most `window_capacity` entries.
void record_observation(CellStatistics& stats, int y, std::size_t window_capacity);

// The robustness measure p(1-p): maximal (0.25) at p = 1/2, zero at the
// endpoints, symmetric under p -> 1-p. Throws std::domain_error outside [0,1].
double c_measure(double p);

// Signed estimation error, estimate - truth.
double estimation_error(double estimate, double truth);

}  // namespace safescout
