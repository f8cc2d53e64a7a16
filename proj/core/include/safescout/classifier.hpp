#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace safescout {

enum class ThresholdRoute { gap, median };

struct ThresholdResult {
  double c_threshold = 0.0;
  // 1-based position in sorted order of the largest adjacent gap (lowest
  // position on ties, which is deterministic and yields the smaller, more
  // conservative threshold).
  std::size_t k_star = 0;
  ThresholdRoute route = ThresholdRoute::median;
  std::vector<std::size_t> sort_order;  // sorted position -> original cell index
  std::vector<double> gaps;             // sorted adjacent differences, length m-1
};

// Threshold over the robustness measures: sort nondecreasing (original index
// breaks ties, keeping the order deterministic), find the largest adjacent
// gap, and use its lower value as the cutoff when the gap sits in the middle
// quartile range [ceil(m/4), ceil(3m/4)]; otherwise fall back to the median
// (lower median for even m, so the cutoff is always an attained value).
// Requires at least 2 cells.
ThresholdResult threshold(std::span<const double> c_values);

struct ClassificationResult {
  ThresholdResult threshold;
  std::vector<bool> safe;              // per cell
  std::vector<std::size_t> safe_set;   // indices of safe cells, ascending
};

// A cell is safe when its measure is at or below the threshold and its final
// estimate is at least 1/2. The second clause keeps decisively-low cells
// (estimate near 0, measure also small) out of the safe set.
ClassificationResult classify(std::span<const double> c_values,
                              std::span<const double> final_estimates);

}  // namespace safescout
