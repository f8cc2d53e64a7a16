#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "safescout/markov.hpp"

namespace safescout {

// Exponential decay rate of the probability that an empirical Bernoulli mean
// lands at eps when the parameter is p: the KL divergence between
// Bernoulli(eps) and Bernoulli(p). Nonnegative, zero iff eps = p. Both
// arguments must be strictly inside (0,1); the boundary is rejected rather
// than mapped to infinity so degenerate cases stay visible to callers.
double rate_function(double eps, double p);

// Stationary-weighted mean success probability, sum_l p_l * pi_l.
// `pi` must be a probability vector (nonnegative, sums to 1 within 1e-12).
double effective_p(std::span<const double> p, std::span<const double> pi);

// rate_function evaluated at the effective success probability.
double rate_bar(double eps, std::span<const double> p, std::span<const double> pi);

// Maximizer of theta*eps - ln(e^theta p + 1 - p) over theta, in closed form:
// ln(eps(1-p) / (p(1-eps))). Positive iff eps > p.
double chernoff_theta_star(double eps, double p);

// Sampled curve of -rate_function(eps, p) over an open grid in (0,1); grid
// points are inset by half a step so the endpoints are excluded.
struct RateCurve {
  double epsilon = 0.0;
  std::vector<std::pair<double, double>> grid;  // (p, -I(eps, p))
};
RateCurve rate_curve(double eps, int n_points);

// Finite-sample corroboration of the i.i.d. limit for a policy-driven chain.
// Simulates `trials` trajectories of length `horizon` under the policy and
// compares the mean observed success fraction against the effective success
// probability of the chain's stationary distribution, plus the empirical
// deviation log-probability against the rate-function prediction. This is a
// diagnostic report: the property is asymptotic and finite runs can only
// corroborate it, so no pass/fail verdict is attached.
struct IndependenceDiagnostic {
  int horizon = 0;
  int trials = 0;
  double epsilon = 0.0;           // deviation threshold for the tail estimate
  double mean_fraction = 0.0;     // mean over trials of S_n / n
  double effective_p = 0.0;       // sum_l p_l * pibar_l
  std::uint64_t deviation_count = 0;
  double empirical_log_rate = 0.0;  // (1/n) ln Phat(|S_n/n - p_eff| >= eps); -inf when count is 0
  double theory_rate_upper = 0.0;   // rate_function(p_eff + eps, p_eff), NaN if out of (0,1)
  double theory_rate_lower = 0.0;   // rate_function(p_eff - eps, p_eff), NaN if out of (0,1)
};
IndependenceDiagnostic asymptotic_independence_diagnostic(const PolicyTable& policy,
                                                          std::span<const double> p, int horizon,
                                                          int trials, double eps,
                                                          std::uint64_t seed);

}  // namespace safescout
