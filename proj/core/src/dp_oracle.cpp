#include "safescout/dp_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "safescout/estimation.hpp"
#include "safescout/policy.hpp"

namespace safescout {

namespace {

double terminal_cost(std::uint64_t s, int n) {
  const double fraction = static_cast<double>(s) / static_cast<double>(n);
  return fraction * (1.0 - fraction);
}

}  // namespace

void HorizonSpec::validate() const {
  if (horizon < 1 || horizon > 14)
    throw std::invalid_argument("horizon outside enumeration budget (1..14)");
  if (m < 1 || m > 3) throw std::invalid_argument("cell count outside enumeration budget (1..3)");
  if (p.size() != m) throw std::invalid_argument("probability vector length mismatch");
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("probability outside [0,1]");
  }
  if (initial.size() != 2 * m) throw std::invalid_argument("initial distribution length mismatch");
  double sum = 0.0;
  for (double v : initial) {
    if (v < 0.0) throw std::invalid_argument("initial distribution has negative mass");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("initial distribution does not sum to 1");
}

std::vector<double> joint_initial_from_cells(std::span<const double> cell_dist,
                                             std::span<const double> p) {
  if (cell_dist.size() != p.size()) throw std::invalid_argument("length mismatch");
  const std::size_t m = p.size();
  std::vector<double> initial(2 * m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    initial[joint_index(k, 1, m)] = cell_dist[k] * p[k];
    initial[joint_index(k, 0, m)] = cell_dist[k] * (1.0 - p[k]);
  }
  return initial;
}

std::vector<double> stage_costs(const std::vector<int>& y_sequence) {
  if (y_sequence.empty()) throw std::invalid_argument("stage_costs: empty sequence");
  const double n = static_cast<double>(y_sequence.size());
  std::vector<double> costs(y_sequence.size());
  double prefix = 0.0;
  for (std::size_t i = 0; i < y_sequence.size(); ++i) {
    const double y = static_cast<double>(y_sequence[i]);
    costs[i] = n * y - y * y - 2.0 * y * prefix;
    prefix += y;
  }
  return costs;
}

double exact_expected_cost(const PolicyTable& policy, const HorizonSpec& spec) {
  spec.validate();
  if (policy.m != spec.m) throw std::invalid_argument("policy size mismatch");
  if (!policy.validate().empty()) throw std::invalid_argument("invalid policy table");

  const std::size_t m = spec.m;
  const int n = spec.horizon;
  const std::size_t states = 2 * m;
  const std::size_t counts = static_cast<std::size_t>(n) + 1;

  // dist[z * counts + s] = P(current joint state = z, successes so far = s).
  std::vector<double> dist(states * counts, 0.0);
  for (std::size_t l = 0; l < m; ++l) {
    dist[joint_index(l, 1, m) * counts + 1] = spec.initial[joint_index(l, 1, m)];
    dist[joint_index(l, 0, m) * counts + 0] = spec.initial[joint_index(l, 0, m)];
  }

  std::vector<double> next(states * counts, 0.0);
  for (int step = 2; step <= n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      for (int u = 0; u <= 1; ++u) {
        const std::size_t z = joint_index(k, u, m);
        for (std::size_t s = 0; s < counts; ++s) {
          const double w = dist[z * counts + s];
          if (w == 0.0) continue;
          for (std::size_t l = 0; l < m; ++l) {
            const double move = policy.at(k, u, l);
            if (move == 0.0) continue;
            next[joint_index(l, 1, m) * counts + s + 1] += w * move * spec.p[l];
            next[joint_index(l, 0, m) * counts + s] += w * move * (1.0 - spec.p[l]);
          }
        }
      }
    }
    dist.swap(next);
  }

  double cost = 0.0;
  for (std::size_t z = 0; z < states; ++z)
    for (std::size_t s = 0; s < counts; ++s)
      if (dist[z * counts + s] != 0.0)
        cost += dist[z * counts + s] * terminal_cost(s, n);
  return cost;
}

OptimalPolicyResult optimal_stationary_cost(const HorizonSpec& spec) {
  spec.validate();
  const std::size_t m = spec.m;
  const std::size_t rows = 2 * m;

  // Enumerate deterministic stationary policies: one destination per
  // (cell, observation) row, m^(2m) in total.
  std::size_t total = 1;
  for (std::size_t i = 0; i < rows; ++i) total *= m;

  OptimalPolicyResult best;
  bool have_best = false;
  std::vector<std::size_t> choice(rows, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rem = code;
    for (std::size_t i = 0; i < rows; ++i) {
      choice[i] = rem % m;
      rem /= m;
    }
    PolicyTable policy(m);
    for (std::size_t k = 0; k < m; ++k)
      for (int u = 0; u <= 1; ++u)
        policy.at(k, u, choice[k * 2 + static_cast<std::size_t>(u)]) = 1.0;

    const double cost = exact_expected_cost(policy, spec);
    if (!have_best || cost < best.cost) {
      best.policy = policy;
      best.cost = cost;
      have_best = true;
    }
  }
  return best;
}

GreedyGapReport greedy_gap(const HorizonSpec& spec, int runs, std::uint64_t seed) {
  spec.validate();
  if (runs < 1) throw std::invalid_argument("greedy_gap: runs must be positive");

  GreedyGapReport report;
  report.optimal_cost = optimal_stationary_cost(spec).cost;
  report.runs = runs;

  const std::size_t m = spec.m;
  if (m == 1) {
    // Single policy: the greedy rule has no choice to make, so evaluate it
    // exactly instead of by simulation.
    PolicyTable only(1);
    only.at(0, 0, 0) = only.at(0, 1, 0) = 1.0;
    report.greedy_mean = exact_expected_cost(only, spec);
    report.greedy_stderr = 0.0;
    report.gap = 0.0;
    return report;
  }

  const int n = spec.horizon;
  PolicyConfig tie_config;  // only tie_tolerance is consulted here
  std::vector<std::size_t> all_cells(m);
  for (std::size_t i = 0; i < m; ++i) all_cells[i] = i;

  double sum = 0.0;
  double sum_sq = 0.0;
  for (int r = 0; r < runs; ++r) {
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(r)));

    // Sample the initial joint state.
    const double u0 = rng.next_unit();
    double acc = 0.0;
    std::size_t z = 2 * m - 1;
    for (std::size_t i = 0; i < 2 * m; ++i) {
      acc += spec.initial[i];
      if (u0 < acc) {
        z = i;
        break;
      }
    }
    std::size_t cell = z < m ? z : z - m;
    int y = z < m ? 1 : 0;

    std::vector<CellStatistics> stats(m);
    record_observation(stats[cell], y, 1);
    std::uint64_t successes = static_cast<std::uint64_t>(y);

    for (int step = 2; step <= n; ++step) {
      std::vector<double> estimates(m);
      for (std::size_t i = 0; i < m; ++i) estimates[i] = stats[i].estimate();
      cell = select_next(all_cells, estimates, tie_config, rng);
      y = rng.bernoulli(spec.p[cell]) ? 1 : 0;
      record_observation(stats[cell], y, 1);
      successes += static_cast<std::uint64_t>(y);
    }

    const double cost = terminal_cost(successes, n);
    sum += cost;
    sum_sq += cost * cost;
  }

  report.greedy_mean = sum / runs;
  const double variance = std::max(0.0, sum_sq / runs - report.greedy_mean * report.greedy_mean);
  report.greedy_stderr = std::sqrt(variance / runs);
  report.gap = report.greedy_mean - report.optimal_cost;
  return report;
}

}  // namespace safescout
