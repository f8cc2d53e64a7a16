#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "safescout/rng.hpp"

namespace safescout {

// Thrown when a chain's stationary distribution is not unique (reducible
// chain with more than one closed class, identity matrix, ...). Callers get
// the report rather than a silently chosen ergodic class.
class NonUniqueStationaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stationary randomized decision rule: row (cell k, observation u) gives the
// distribution of the next cell. Stored row-major as (k, u, l).
struct PolicyTable {
  std::size_t m = 0;
  std::vector<double> data;

  PolicyTable() = default;
  explicit PolicyTable(std::size_t cells) : m(cells), data(cells * 2 * cells, 0.0) {}

  double& at(std::size_t k, int u, std::size_t l) {
    return data[(k * 2 + static_cast<std::size_t>(u)) * m + l];
  }
  double at(std::size_t k, int u, std::size_t l) const {
    return data[(k * 2 + static_cast<std::size_t>(u)) * m + l];
  }

  // Every row on the probability simplex within 1e-12.
  std::vector<std::string> validate() const;

  static PolicyTable uniform(std::size_t cells);
};

// Minimal dense row-major matrix; rows of the transition matrices built here
// are probability vectors.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Index of joint state (cell l, observation v) in the fixed state ordering
// ((.,1) block first, then the (.,0) block). The ordering is part of the
// serialization contract for emitted matrices and distributions.
inline std::size_t joint_index(std::size_t l, int v, std::size_t m) {
  return v == 1 ? l : m + l;
}

// Joint chain on (cell, observation) pairs: the entry from (k,u) to (l,v) is
// pi(k,u)[l] * p_l^v -- move first, then observe at the destination cell.
Matrix build_joint(const PolicyTable& policy, std::span<const double> p);

// Cell-marginal chain: entry from k to l is
// p_k * pi(k,1)[l] + (1-p_k) * pi(k,0)[l].
Matrix build_reduced(const PolicyTable& policy, std::span<const double> p);

// Left stationary vector of a row-stochastic matrix: pi^T M = pi^T, residual
// infinity-norm <= tol. Direct null-space solve with the normalization row
// appended; falls back to power iteration if the direct solution is not
// acceptable. Throws NonUniqueStationaryError when the stationary
// distribution is not unique.
std::vector<double> stationary(const Matrix& matrix, double tol = 1e-12);

// Check that the joint chain's stationary distribution is the observation
// lift of the reduced chain's: pi*_{(l,1)} = p_l * pibar_l and
// pi*_{(l,0)} = (1-p_l) * pibar_l.
struct LiftReport {
  std::vector<double> joint_pi;
  std::vector<double> reduced_pi;
  double max_deviation = 0.0;
  bool within_tol = false;
};
LiftReport verify_lift(const PolicyTable& policy, std::span<const double> p, double tol = 1e-10);

// Closed-form self-transition pair recovered from the stationary distribution
// concentrated at one cell. The identity p*a + (1-p)*b = 1 holds exactly, but
// the pair can leave [0,1] for p far from 1/2; `valid` flags that rather than
// normalizing it away.
struct StayingPolicy {
  double stay_given_1 = 0.0;
  double stay_given_0 = 0.0;
  bool valid = false;
};
StayingPolicy retrieve_staying_policy(double p);

// Empirical transition counts over joint states for an observed trajectory.
struct TransitionCounts {
  std::size_t m = 0;
  std::vector<std::uint64_t> counts;  // (2m)^2, row-major in joint ordering

  std::uint64_t at(std::size_t from, std::size_t to) const { return counts[from * 2 * m + to]; }
  std::uint64_t total() const;
};
TransitionCounts count_transitions(std::span<const std::pair<std::size_t, int>> trajectory,
                                   std::size_t m);

// One joint-chain step: sample the next cell from the policy row, then the
// observation at the destination.
std::pair<std::size_t, int> step_joint_chain(const PolicyTable& policy,
                                             std::span<const double> p, std::size_t cell, int obs,
                                             Rng& rng);

}  // namespace safescout
