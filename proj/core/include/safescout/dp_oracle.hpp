#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "safescout/markov.hpp"

namespace safescout {

// Tiny-scale exact evaluation setup. Sizes are capped so the stationary
// deterministic policy space (m^(2m)) and the horizon stay exhaustively
// enumerable.
struct HorizonSpec {
  int horizon = 0;                // N, 1..14
  std::size_t m = 0;              // 1..3
  std::vector<double> p;          // true probabilities, length m
  std::vector<double> initial;    // distribution over joint states, length 2m

  void validate() const;          // throws std::invalid_argument / budget errors
};

// Initial joint distribution induced by a distribution over cells with the
// first observation drawn at the starting cell.
std::vector<double> joint_initial_from_cells(std::span<const double> cell_dist,
                                             std::span<const double> p);

// Additive decomposition of N*S - S^2 with S = sum of the bits: stage i
// contributes N*y_i - y_i^2 - 2*y_i*(y_1 + ... + y_{i-1}).
std::vector<double> stage_costs(const std::vector<int>& y_sequence);

// Exact expected terminal cost E[(S/N)(1 - S/N)] of a stationary policy,
// computed by forward recursion over (joint state, running success count).
// Algebraically identical to summing over all (cell, observation) paths.
double exact_expected_cost(const PolicyTable& policy, const HorizonSpec& spec);

// Exhaustive minimum over all m^(2m) deterministic stationary policies. This
// bounds the true history-dependent optimum from above while still dominating
// the greedy rule, which keeps the comparison one-sided.
struct OptimalPolicyResult {
  PolicyTable policy;
  double cost = 0.0;
};
OptimalPolicyResult optimal_stationary_cost(const HorizonSpec& spec);

// Monte Carlo cost of the one-step greedy selection (running estimates with
// the 0.5 prior, uniform tie-breaking) against the exhaustive stationary
// optimum. For m = 1 there is only one policy, so the greedy cost is
// evaluated exactly and the gap is exactly zero.
struct GreedyGapReport {
  double greedy_mean = 0.0;
  double greedy_stderr = 0.0;
  double optimal_cost = 0.0;
  double gap = 0.0;  // greedy_mean - optimal_cost
  int runs = 0;
};
GreedyGapReport greedy_gap(const HorizonSpec& spec, int runs, std::uint64_t seed);

}  // namespace safescout
