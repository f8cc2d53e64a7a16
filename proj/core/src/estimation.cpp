#include "safescout/estimation.hpp"

#include <stdexcept>

namespace safescout {

void record_observation(CellStatistics& stats, int y, std::size_t window_capacity) {
  stats.visits += 1;
  stats.successes += static_cast<std::uint64_t>(y != 0);
  stats.history.push_back(stats.estimate());
  if (stats.history.size() > window_capacity)
    stats.history.erase(stats.history.begin(),
                        stats.history.begin() +
                            static_cast<std::ptrdiff_t>(stats.history.size() - window_capacity));
}

double c_measure(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("c_measure: p outside [0,1]");
  return p * (1.0 - p);
}

double estimation_error(double estimate, double truth) { return estimate - truth; }

}  // namespace safescout
