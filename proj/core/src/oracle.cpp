#include "safescout/oracle.hpp"

#include <stdexcept>
#include <utility>

namespace safescout {

TrustOracle::TrustOracle(std::vector<double> true_p, std::uint64_t seed)
    : true_p_(std::move(true_p)), rng_(seed) {
  for (double p : true_p_) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("oracle probability out of [0,1]");
  }
}

int TrustOracle::observe(std::size_t cell) {
  if (cell >= true_p_.size()) throw std::out_of_range("oracle cell index out of range");
  return rng_.bernoulli(true_p_[cell]) ? 1 : 0;
}

}  // namespace safescout
