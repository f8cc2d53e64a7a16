#include "safescout/ldp.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace safescout {

namespace {

void require_interior(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error(std::string(name) + " must be strictly inside (0,1)");
}

}  // namespace

double rate_function(double eps, double p) {
  require_interior(eps, "eps");
  require_interior(p, "p");
  return eps * std::log(eps / p) + (1.0 - eps) * std::log((1.0 - eps) / (1.0 - p));
}

double effective_p(std::span<const double> p, std::span<const double> pi) {
  if (p.size() != pi.size()) throw std::invalid_argument("effective_p: length mismatch");
  double sum = 0.0;
  double dot = 0.0;
  for (std::size_t l = 0; l < pi.size(); ++l) {
    if (pi[l] < -1e-12) throw std::invalid_argument("effective_p: negative weight");
    const double w = std::max(pi[l], 0.0);
    sum += w;
    dot += p[l] * w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("effective_p: weights do not sum to 1");
  return dot;
}

double rate_bar(double eps, std::span<const double> p, std::span<const double> pi) {
  const double p_eff = effective_p(p, pi);
  if (!(p_eff > 0.0 && p_eff < 1.0))
    throw std::domain_error("rate_bar: degenerate effective probability");
  return rate_function(eps, p_eff);
}

double chernoff_theta_star(double eps, double p) {
  require_interior(eps, "eps");
  require_interior(p, "p");
  return std::log(eps * (1.0 - p) / (p * (1.0 - eps)));
}

RateCurve rate_curve(double eps, int n_points) {
  require_interior(eps, "eps");
  if (n_points < 2) throw std::invalid_argument("rate_curve: need at least 2 points");
  RateCurve curve;
  curve.epsilon = eps;
  curve.grid.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n_points);
    curve.grid.emplace_back(p, -rate_function(eps, p));
  }
  return curve;
}

IndependenceDiagnostic asymptotic_independence_diagnostic(const PolicyTable& policy,
                                                          std::span<const double> p, int horizon,
                                                          int trials, double eps,
                                                          std::uint64_t seed) {
  if (horizon < 100) throw std::invalid_argument("diagnostic: horizon must be >= 100");
  if (trials < 1000) throw std::invalid_argument("diagnostic: trials must be >= 1000");
  const Matrix reduced = build_reduced(policy, p);
  const std::vector<double> pibar = stationary(reduced);  // throws when not unique

  IndependenceDiagnostic report;
  report.horizon = horizon;
  report.trials = trials;
  report.epsilon = eps;
  report.effective_p = effective_p(p, pibar);

  const std::size_t m = policy.m;
  double fraction_sum = 0.0;
  std::uint64_t deviations = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(t)));
    std::size_t cell = rng.uniform_index(m);
    int obs = rng.bernoulli(p[cell]) ? 1 : 0;
    std::uint64_t ones = static_cast<std::uint64_t>(obs);
    for (int n = 1; n < horizon; ++n) {
      std::tie(cell, obs) = step_joint_chain(policy, p, cell, obs, rng);
      ones += static_cast<std::uint64_t>(obs);
    }
    const double fraction = static_cast<double>(ones) / static_cast<double>(horizon);
    fraction_sum += fraction;
    if (std::abs(fraction - report.effective_p) >= eps) deviations += 1;
  }
  report.mean_fraction = fraction_sum / static_cast<double>(trials);
  report.deviation_count = deviations;
  report.empirical_log_rate =
      deviations == 0
          ? -std::numeric_limits<double>::infinity()
          : std::log(static_cast<double>(deviations) / static_cast<double>(trials)) /
                static_cast<double>(horizon);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double upper = report.effective_p + eps;
  const double lower = report.effective_p - eps;
  report.theory_rate_upper =
      (upper > 0.0 && upper < 1.0) ? rate_function(upper, report.effective_p) : nan;
  report.theory_rate_lower =
      (lower > 0.0 && lower < 1.0) ? rate_function(lower, report.effective_p) : nan;
  return report;
}

}  // namespace safescout
