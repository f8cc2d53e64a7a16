#include "safescout/markov.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace safescout {

namespace {

constexpr double kRowSumTol = 1e-12;

void check_probabilities(std::span<const double> p) {
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("probability outside [0,1]");
  }
}

double obs_probability(double p_l, int v) { return v == 1 ? p_l : 1.0 - p_l; }

double residual_inf_norm(const Matrix& matrix, const std::vector<double>& pi) {
  const std::size_t n = matrix.rows;
  double worst = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) acc += pi[r] * matrix.at(r, c);
    worst = std::max(worst, std::abs(acc - pi[c]));
  }
  return worst;
}

std::vector<double> power_iteration(const Matrix& matrix, std::vector<double> pi, double tol) {
  const std::size_t n = matrix.rows;
  std::vector<double> next(n, 0.0);
  for (int iter = 0; iter < 2'000'000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const double w = pi[r];
      if (w == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) next[c] += w * matrix.at(r, c);
    }
    const double sum = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& v : next) v /= sum;
    double delta = 0.0;
    for (std::size_t c = 0; c < n; ++c) delta = std::max(delta, std::abs(next[c] - pi[c]));
    pi.swap(next);
    if (delta <= tol * 0.1 && residual_inf_norm(matrix, pi) <= tol) return pi;
  }
  throw std::runtime_error("stationary: power iteration did not converge");
}

}  // namespace

std::vector<std::string> PolicyTable::validate() const {
  std::vector<std::string> violations;
  if (data.size() != m * 2 * m) {
    violations.push_back("policy table has wrong size");
    return violations;
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (int u = 0; u <= 1; ++u) {
      double sum = 0.0;
      for (std::size_t l = 0; l < m; ++l) {
        const double v = at(k, u, l);
        if (!(v >= 0.0 && v <= 1.0)) {
          violations.push_back("policy entry outside [0,1] at row (" + std::to_string(k + 1) +
                               "," + std::to_string(u) + ")");
          break;
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > kRowSumTol)
        violations.push_back("policy row (" + std::to_string(k + 1) + "," + std::to_string(u) +
                             ") does not sum to 1");
    }
  }
  return violations;
}

PolicyTable PolicyTable::uniform(std::size_t cells) {
  PolicyTable table(cells);
  const double w = 1.0 / static_cast<double>(cells);
  std::fill(table.data.begin(), table.data.end(), w);
  return table;
}

Matrix build_joint(const PolicyTable& policy, std::span<const double> p) {
  if (policy.m != p.size()) throw std::invalid_argument("policy/probability size mismatch");
  if (!policy.validate().empty()) throw std::invalid_argument("invalid policy table");
  check_probabilities(p);

  const std::size_t m = policy.m;
  Matrix joint(2 * m, 2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    for (int u = 0; u <= 1; ++u) {
      const std::size_t row = joint_index(k, u, m);
      for (std::size_t l = 0; l < m; ++l) {
        const double move = policy.at(k, u, l);
        joint.at(row, joint_index(l, 1, m)) = move * obs_probability(p[l], 1);
        joint.at(row, joint_index(l, 0, m)) = move * obs_probability(p[l], 0);
      }
    }
  }
  return joint;
}

Matrix build_reduced(const PolicyTable& policy, std::span<const double> p) {
  if (policy.m != p.size()) throw std::invalid_argument("policy/probability size mismatch");
  if (!policy.validate().empty()) throw std::invalid_argument("invalid policy table");
  check_probabilities(p);

  const std::size_t m = policy.m;
  Matrix reduced(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      reduced.at(k, l) = p[k] * policy.at(k, 1, l) + (1.0 - p[k]) * policy.at(k, 0, l);
    }
  }
  return reduced;
}

std::vector<double> stationary(const Matrix& matrix, double tol) {
  const std::size_t n = matrix.rows;
  if (n == 0 || matrix.cols != n) throw std::invalid_argument("stationary: matrix not square");
  for (std::size_t r = 0; r < n; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const double v = matrix.at(r, c);
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("stationary: entry outside [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("stationary: row not stochastic");
  }

  // A = M^T - I. The stationary distributions span its null space; a unique
  // chain has a one-dimensional kernel.
  Eigen::MatrixXd a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          matrix.at(c, r) - (r == c ? 1.0 : 0.0);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-9);
  if (lu.dimensionOfKernel() > 1)
    throw NonUniqueStationaryError("stationary distribution is not unique");

  // Least-squares solve of the stacked system [A; 1^T] pi = [0; 1].
  Eigen::MatrixXd stacked(n + 1, n);
  stacked.topRows(static_cast<Eigen::Index>(n)) = a;
  stacked.row(static_cast<Eigen::Index>(n)).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
  rhs(static_cast<Eigen::Index>(n)) = 1.0;
  Eigen::VectorXd sol = stacked.colPivHouseholderQr().solve(rhs);

  std::vector<double> pi(n);
  bool usable = true;
  for (std::size_t i = 0; i < n; ++i) {
    double v = sol(static_cast<Eigen::Index>(i));
    if (v < -1e-9) usable = false;
    pi[i] = std::max(v, 0.0);
  }
  const double sum = std::accumulate(pi.begin(), pi.end(), 0.0);
  if (sum <= 0.0) usable = false;
  if (usable) {
    for (double& v : pi) v /= sum;
    if (residual_inf_norm(matrix, pi) <= tol) return pi;
  }

  std::vector<double> start(n, 1.0 / static_cast<double>(n));
  return power_iteration(matrix, usable ? pi : start, tol);
}

LiftReport verify_lift(const PolicyTable& policy, std::span<const double> p, double tol) {
  LiftReport report;
  const Matrix reduced = build_reduced(policy, p);
  const Matrix joint = build_joint(policy, p);
  report.reduced_pi = stationary(reduced);
  report.joint_pi = stationary(joint);

  const std::size_t m = policy.m;
  for (std::size_t l = 0; l < m; ++l) {
    const double lifted_1 = p[l] * report.reduced_pi[l];
    const double lifted_0 = (1.0 - p[l]) * report.reduced_pi[l];
    report.max_deviation =
        std::max({report.max_deviation, std::abs(report.joint_pi[joint_index(l, 1, m)] - lifted_1),
                  std::abs(report.joint_pi[joint_index(l, 0, m)] - lifted_0)});
  }
  report.within_tol = report.max_deviation <= tol;
  return report;
}

StayingPolicy retrieve_staying_policy(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("retrieve_staying_policy: p must be strictly inside (0,1)");
  const double denom = p * p + (1.0 - p) * (1.0 - p);
  StayingPolicy result;
  result.stay_given_1 = p / denom;
  result.stay_given_0 = (1.0 - p) / denom;
  result.valid = result.stay_given_1 <= 1.0 && result.stay_given_0 <= 1.0;
  return result;
}

std::uint64_t TransitionCounts::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

TransitionCounts count_transitions(std::span<const std::pair<std::size_t, int>> trajectory,
                                   std::size_t m) {
  if (trajectory.size() < 2)
    throw std::invalid_argument("count_transitions: trajectory shorter than 2");
  TransitionCounts counts;
  counts.m = m;
  counts.counts.assign(4 * m * m, 0);
  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i) {
    const auto [ck, cu] = trajectory[i];
    const auto [cl, cv] = trajectory[i + 1];
    if (ck >= m || cl >= m) throw std::invalid_argument("count_transitions: cell out of range");
    counts.counts[joint_index(ck, cu, m) * 2 * m + joint_index(cl, cv, m)] += 1;
  }
  return counts;
}

std::pair<std::size_t, int> step_joint_chain(const PolicyTable& policy,
                                             std::span<const double> p, std::size_t cell, int obs,
                                             Rng& rng) {
  const std::size_t m = policy.m;
  const double u = rng.next_unit();
  double acc = 0.0;
  std::size_t next = m - 1;  // guard against accumulated rounding
  for (std::size_t l = 0; l < m; ++l) {
    acc += policy.at(cell, obs, l);
    if (u < acc) {
      next = l;
      break;
    }
  }
  const int y = rng.bernoulli(p[next]) ? 1 : 0;
  return {next, y};
}

}  // namespace safescout
