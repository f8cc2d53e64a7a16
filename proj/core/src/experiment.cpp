#include "safescout/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

namespace safescout {

namespace {

ReplicationResult run_replication(const ExperimentConfig& config, int index,
                                  const std::vector<bool>& true_safe) {
  const std::uint64_t master = config.learner.seed;
  const std::uint64_t oracle_seed = substream_seed(master, 2 * static_cast<std::uint64_t>(index));
  const std::uint64_t policy_seed =
      substream_seed(master, 2 * static_cast<std::uint64_t>(index) + 1);

  TrustOracle oracle(config.environment.true_p, oracle_seed);
  LearnerConfig learner = config.learner;
  learner.seed = policy_seed;

  ReplicationResult result;
  result.log = run(config.environment, oracle, learner);

  ReplicationSummary& summary = result.summary;
  summary.index = index;
  summary.oracle_seed = oracle_seed;
  summary.policy_seed = policy_seed;
  summary.terminated = result.log.terminated;
  summary.iterations = result.log.iterations();

  const std::size_t m = config.environment.cell_count();
  std::vector<std::uint64_t> visits(m, 0);
  for (const StepRecord& step : result.log.steps) {
    visits[step.cell] += 1;
    if (!true_safe[step.cell]) summary.unsafe_visits += 1;
  }

  const bool completed = result.log.terminated == Termination::active_set_empty;
  std::vector<double> c_values(m, 0.0);
  std::vector<double> estimates(m, 0.0);
  if (completed) {
    for (std::size_t k = 0; k < m; ++k) {
      c_values[k] = result.log.final_cells[k]->c_k;
      estimates[k] = result.log.final_cells[k]->p_final;
    }
    const ClassificationResult labels = classify(c_values, estimates);
    summary.c_threshold = labels.threshold.c_threshold;
    summary.route = labels.threshold.route;
    summary.k_star = labels.threshold.k_star;
    summary.safe_set = labels.safe_set;
    for (std::size_t k = 0; k < m; ++k) {
      CellOutcome cell;
      cell.cell = k;
      cell.visits = visits[k];
      cell.n_k = result.log.final_cells[k]->n_k;
      cell.p_final = result.log.final_cells[k]->p_final;
      cell.c_k = result.log.final_cells[k]->c_k;
      cell.safe = labels.safe[k];
      summary.cells.push_back(cell);
    }
  } else {
    for (std::size_t k = 0; k < m; ++k) {
      CellOutcome cell;
      cell.cell = k;
      cell.visits = visits[k];
      if (result.log.final_cells[k]) {
        cell.n_k = result.log.final_cells[k]->n_k;
        cell.p_final = result.log.final_cells[k]->p_final;
        cell.c_k = result.log.final_cells[k]->c_k;
      }
      summary.cells.push_back(cell);
    }
  }
  return result;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, int jobs) {
  const auto violations = validate(config.environment);
  if (!violations.empty())
    throw ConfigError("invalid environment: " + violations.front());
  if (config.replications < 1) throw ConfigError("replications must be >= 1");

  const std::size_t m = config.environment.cell_count();

  // True-parameter classification, used for the unsafe-visit accounting.
  std::vector<double> true_c(m);
  for (std::size_t k = 0; k < m; ++k) true_c[k] = c_measure(config.environment.true_p[k]);
  const std::vector<bool> true_safe = classify(true_c, config.environment.true_p).safe;

  ExperimentOutcome outcome;
  outcome.replications.resize(static_cast<std::size_t>(config.replications));

  const int workers = std::max(1, std::min(jobs, config.replications));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= config.replications || failed.load()) return;
      try {
        outcome.replications[static_cast<std::size_t>(i)] =
            run_replication(config, i, true_safe);
      } catch (const std::exception& e) {
        std::scoped_lock lock(failure_mutex);
        failed.store(true);
        failure = e.what();
        return;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error("replication failed: " + failure);

  // Aggregate.
  ExperimentReport& report = outcome.report;
  for (const ReplicationResult& rep : outcome.replications)
    report.replications.push_back(rep.summary);

  AggregateStats& agg = report.aggregate;
  agg.runs = config.replications;
  agg.all_terminated = true;
  agg.safe_frequency.assign(m, 0.0);
  std::map<std::vector<std::size_t>, int> safe_set_counts;
  std::vector<double> errors;
  int completed = 0;
  for (const ReplicationResult& rep : outcome.replications) {
    if (rep.summary.terminated != Termination::active_set_empty) {
      agg.all_terminated = false;
      outcome.any_capped = true;
      continue;
    }
    completed += 1;
    safe_set_counts[rep.summary.safe_set] += 1;
    for (const CellOutcome& cell : rep.summary.cells) {
      if (cell.safe && *cell.safe) agg.safe_frequency[cell.cell] += 1.0;
      if (cell.p_final)
        errors.push_back(std::abs(*cell.p_final - config.environment.true_p[cell.cell]));
    }
  }
  if (completed > 0) {
    for (double& f : agg.safe_frequency) f /= static_cast<double>(completed);
    const auto modal = std::max_element(
        safe_set_counts.begin(), safe_set_counts.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    agg.modal_safe_set = modal->first;
    agg.modal_safe_set_frequency =
        static_cast<double>(modal->second) / static_cast<double>(completed);
  }
  agg.error_q50 = quantile(errors, 0.5);
  agg.error_q90 = quantile(errors, 0.9);
  agg.error_max = errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
  return outcome;
}

std::filesystem::path write_experiment_outputs(const ExperimentOutcome& outcome,
                                               const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const ReplicationResult& rep : outcome.replications) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03d.jsonl", rep.summary.index);
    std::ofstream file(out_dir / name, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + (out_dir / name).string());
    file << serialize_run_log(rep.log);
  }
  const std::filesystem::path report_path = out_dir / "report.json";
  std::ofstream report(report_path, std::ios::binary);
  if (!report) throw std::runtime_error("cannot open output file " + report_path.string());
  report << serialize_report(outcome.report);
  return report_path;
}

}  // namespace safescout
