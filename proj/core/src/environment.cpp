#include "safescout/environment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace safescout {

namespace {

double squared_distance(const Point& a, const Point& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double d = a.coords[i] - b.coords[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

NearestResult nearest_center(const Point& point, const EnvironmentSpec& env) {
  if (env.centers.empty()) throw std::invalid_argument("environment has no centers");
  if (point.coords.size() != static_cast<std::size_t>(env.dimension))
    throw std::invalid_argument("point dimension does not match environment dimension");

  NearestResult result;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < env.centers.size(); ++j) {
    const double d2 = squared_distance(point, env.centers[j]);
    if (d2 < best) {
      best = d2;
      result.index = j;
      result.boundary = false;
    } else if (d2 == best) {
      result.boundary = true;
    }
  }
  return result;
}

std::vector<std::string> validate(const EnvironmentSpec& env) {
  std::vector<std::string> violations;
  const std::size_t m = env.centers.size();

  if (env.dimension != 2 && env.dimension != 3)
    violations.push_back("dimension must be 2 or 3");
  if (m < 2) violations.push_back("at least 2 centers required");
  if (env.true_p.size() != m)
    violations.push_back("true_p length does not match center count");

  for (std::size_t j = 0; j < m; ++j) {
    if (env.centers[j].coords.size() != static_cast<std::size_t>(env.dimension)) {
      violations.push_back("center " + std::to_string(j + 1) + " has wrong dimension");
      continue;
    }
    for (double c : env.centers[j].coords) {
      if (!std::isfinite(c)) {
        violations.push_back("center " + std::to_string(j + 1) + " has non-finite coordinate");
        break;
      }
    }
  }

  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      if (env.centers[j].coords == env.centers[k].coords) {
        violations.push_back("centers not pairwise distinct (" + std::to_string(j + 1) +
                             ", " + std::to_string(k + 1) + ")");
      }
    }
  }

  for (std::size_t j = 0; j < env.true_p.size(); ++j) {
    const double p = env.true_p[j];
    if (!(p >= 0.0 && p <= 1.0))
      violations.push_back("probability out of range at cell " + std::to_string(j + 1));
  }

  return violations;
}

}  // namespace safescout
