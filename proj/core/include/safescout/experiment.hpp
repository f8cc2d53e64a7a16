#pragma once

#include <filesystem>
#include <vector>

#include "safescout/io.hpp"

namespace safescout {

// One replication's full artifacts.
struct ReplicationResult {
  RunLog log;
  ReplicationSummary summary;
};

struct ExperimentOutcome {
  std::vector<ReplicationResult> replications;
  ExperimentReport report;
  bool any_capped = false;
};

// Runs config.replications independent learning runs and classifies each
// completed one. Replication i draws its oracle and policy streams from
// substreams (2i, 2i+1) of the master seed, so results are independent of
// scheduling; `jobs` only bounds the worker threads. The per-replication
// unsafe-visit counts are taken against the classification of the true
// parameters.
ExperimentOutcome run_experiment(const ExperimentConfig& config, int jobs = 1);

// Writes run_<index>.jsonl per replication plus report.json; returns the
// report path. Bodies carry no timestamps, so identical inputs give
// byte-identical files.
std::filesystem::path write_experiment_outputs(const ExperimentOutcome& outcome,
                                               const std::filesystem::path& out_dir);

}  // namespace safescout
