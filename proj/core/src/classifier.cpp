#include "safescout/classifier.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace safescout {

ThresholdResult threshold(std::span<const double> c_values) {
  const std::size_t m = c_values.size();
  if (m < 2) throw std::invalid_argument("threshold: need at least 2 cells");
  for (double c : c_values) {
    if (!(c >= 0.0 && c <= 0.25)) throw std::invalid_argument("threshold: c outside [0, 0.25]");
  }

  ThresholdResult result;
  result.sort_order.resize(m);
  std::iota(result.sort_order.begin(), result.sort_order.end(), std::size_t{0});
  std::stable_sort(result.sort_order.begin(), result.sort_order.end(),
                   [&](std::size_t a, std::size_t b) { return c_values[a] < c_values[b]; });

  result.gaps.resize(m - 1);
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    result.gaps[i] = c_values[result.sort_order[i + 1]] - c_values[result.sort_order[i]];
    if (result.gaps[i] > result.gaps[best]) best = i;
  }
  result.k_star = best + 1;  // 1-based sorted position

  const std::size_t lo = (m + 3) / 4;      // ceil(m/4)
  const std::size_t hi = (3 * m + 3) / 4;  // ceil(3m/4)
  if (result.k_star >= lo && result.k_star <= hi) {
    result.route = ThresholdRoute::gap;
    result.c_threshold = c_values[result.sort_order[result.k_star - 1]];
  } else {
    result.route = ThresholdRoute::median;
    // Lower median: position m/2 for even m, the middle for odd m (1-based),
    // i.e. sorted index (m-1)/2.
    result.c_threshold = c_values[result.sort_order[(m - 1) / 2]];
  }
  return result;
}

ClassificationResult classify(std::span<const double> c_values,
                              std::span<const double> final_estimates) {
  if (c_values.size() != final_estimates.size())
    throw std::invalid_argument("classify: length mismatch");
  for (double p : final_estimates) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("classify: estimate outside [0,1]");
  }

  ClassificationResult result;
  result.threshold = threshold(c_values);
  result.safe.resize(c_values.size());
  for (std::size_t k = 0; k < c_values.size(); ++k) {
    result.safe[k] = c_values[k] <= result.threshold.c_threshold && final_estimates[k] >= 0.5;
    if (result.safe[k]) result.safe_set.push_back(k);
  }
  return result;
}

}  // namespace safescout
