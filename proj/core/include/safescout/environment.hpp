#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace safescout {

// A point in the d-dimensional workspace, d in {2, 3}.
struct Point {
  std::vector<double> coords;
};

// The partitioned environment: cell centers plus the per-cell ground-truth
// success probabilities. The probabilities are the simulation's secret; the
// learner only ever sees them through the oracle's binary responses.
// Cell indices are 0-based throughout the library; file formats are 1-based.
struct EnvironmentSpec {
  int dimension = 2;
  std::vector<Point> centers;
  std::vector<double> true_p;

  std::size_t cell_count() const { return centers.size(); }
};

struct NearestResult {
  std::size_t index = 0;
  // Set when the point is equidistant from two or more centers. Such points
  // lie on a cell boundary and belong to no cell under the strict-inequality
  // membership rule; the returned index is the lowest of the tied centers.
  bool boundary = false;
};

// Index of the center nearest to `point` (Euclidean distance, exact tie
// detection on squared distances). Throws std::invalid_argument on a
// dimension mismatch.
NearestResult nearest_center(const Point& point, const EnvironmentSpec& env);

// Every invariant violation found, empty when the spec is well formed.
std::vector<std::string> validate(const EnvironmentSpec& env);

}  // namespace safescout
