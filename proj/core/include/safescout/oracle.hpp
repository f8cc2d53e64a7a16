#pragma once

#include <cstdint>
#include <vector>

#include "safescout/rng.hpp"

namespace safescout {

// The simulated answerer: queried at a cell, returns 1 with that cell's
// success probability. Owns its own random stream, so two oracles constructed
// with the same seed and queried in the same order produce identical bits.
class TrustOracle {
 public:
  TrustOracle(std::vector<double> true_p, std::uint64_t seed);

  // Binary response for a visit to `cell` (0-based). Throws
  // std::out_of_range for an invalid cell.
  int observe(std::size_t cell);

  std::size_t cell_count() const { return true_p_.size(); }
  const std::vector<double>& true_p() const { return true_p_; }

 private:
  std::vector<double> true_p_;
  Rng rng_;
};

}  // namespace safescout
