#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "safescout/estimation.hpp"
#include "safescout/rng.hpp"

namespace safescout {

struct PolicyConfig {
  double delta = 0.02;            // estimate-stability tolerance
  std::uint64_t n_delta = 250;    // stability window length (visits)
  std::uint64_t n_max = 50;       // consecutive-stay cap
  // Two costs tie when |c_a - c_b| <= tie_tolerance. Rational estimates
  // produce exact ties that floating evaluation can split; the tolerance
  // restores them. Must stay well below delta.
  double tie_tolerance = 1e-9;
};

enum class EliminationReason { none, consecutive_stay, estimate_stable };

struct EliminationDecision {
  bool eliminate = false;
  EliminationReason reason = EliminationReason::none;
};

// One-step greedy selection: argmin over the active cells of
// c = estimate * (1 - estimate). Ties within tie_tolerance of the minimum are
// broken uniformly at random; the draw is consumed only when a tie exists.
// `estimates` indexes all cells; `active` holds the indices still in play.
std::size_t select_next(std::span<const std::size_t> active, std::span<const double> estimates,
                        const PolicyConfig& config, Rng& rng);

// The selection rule as an explicit distribution over all cells: mass 1/r on
// each of the r tied minimizers, zero elsewhere. select_next samples exactly
// from this vector.
std::vector<double> distribution_form(std::span<const std::size_t> active,
                                      std::span<const double> estimates,
                                      const PolicyConfig& config);

// Stopping conditions for the cell observed this iteration, in algorithm
// order: the consecutive-stay cap first, then estimate stability. Stability
// requires a full window (n_delta + 1 recorded visits) with every stored
// estimate within delta of the current one.
EliminationDecision check_elimination(const CellStatistics& stats, const PolicyConfig& config);

}  // namespace safescout
