// safescout: active safe-region learning simulator.
//
// Subcommands: simulate, classify, rate-curve, stationary, dp-compare.
// Exit codes: 0 success; 1 a computation reported failure (iteration cap,
// reducible chain); 2 invalid input; 3 I/O failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "safescout/dp_oracle.hpp"
#include "safescout/experiment.hpp"
#include "safescout/io.hpp"
#include "safescout/ldp.hpp"

namespace fs = std::filesystem;
using namespace safescout;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

std::string format_safe_set(const std::vector<std::size_t>& safe_set) {
  std::string out = "{";
  for (std::size_t i = 0; i < safe_set.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(safe_set[i] + 1);
  }
  return out + "}";
}

// CLI flag beats SAFESCOUT_SEED, which beats the config value.
std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_value,
                           std::uint64_t config_value) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("SAFESCOUT_SEED")) return std::stoull(env);
  return config_value;
}

int cmd_simulate(const std::string& config_path, bool seed_given, std::uint64_t seed,
                 int replications_flag, int jobs, const std::string& out_flag) {
  ExperimentConfig config;
  if (config_path.empty()) {
    config = table1_preset();
  } else {
    config = parse_experiment_config(read_file(config_path),
                                     fs::path(config_path).parent_path());
  }
  config.learner.seed = resolve_seed(seed_given, seed, config.learner.seed);
  if (replications_flag > 0) config.replications = replications_flag;
  const fs::path out_dir = out_flag.empty() ? fs::path(config.output_dir) : fs::path(out_flag);

  const ExperimentOutcome outcome = run_experiment(config, jobs);
  write_experiment_outputs(outcome, out_dir);

  for (const ReplicationSummary& rep : outcome.report.replications) {
    std::cout << "run " << rep.index << ": terminated="
              << (rep.terminated == Termination::active_set_empty ? "active_set_empty"
                                                                  : "iteration_cap")
              << " iterations=" << rep.iterations;
    if (rep.c_threshold)
      std::cout << " c_T=" << format_real(*rep.c_threshold) << " safe="
                << format_safe_set(rep.safe_set);
    std::cout << "\n";
  }
  std::cout << "report: " << (out_dir / "report.json").string() << "\n";
  return outcome.any_capped ? 1 : 0;
}

int cmd_classify(const std::string& input_path, const std::string& out_path) {
  const std::vector<CellMeasure> rows = parse_cell_measures_csv(read_file(input_path));
  std::vector<double> c_values, estimates;
  for (const CellMeasure& row : rows) {
    c_values.push_back(row.c);
    estimates.push_back(row.p);
  }
  const ClassificationResult result = classify(c_values, estimates);
  const std::string body = serialize_classification(result, c_values, estimates);
  if (!out_path.empty()) write_file(out_path, body);

  std::cout << "c_T=" << format_real(result.threshold.c_threshold) << " route="
            << (result.threshold.route == ThresholdRoute::gap ? "gap" : "median") << "\n";
  for (std::size_t k = 0; k < c_values.size(); ++k)
    std::cout << "cell " << k + 1 << ": c=" << format_real(c_values[k])
              << " p=" << format_real(estimates[k]) << " "
              << (result.safe[k] ? "safe" : "unsafe") << "\n";
  std::cout << "safe_set=" << format_safe_set(result.safe_set) << "\n";
  return 0;
}

int cmd_rate_curve(double eps, int points, const std::string& out_path) {
  const RateCurve curve = rate_curve(eps, points);
  const std::string body = rate_curve_csv(curve);
  if (out_path.empty())
    std::cout << body;
  else
    write_file(out_path, body);
  return 0;
}

int cmd_stationary(const std::string& policy_path, const std::string& p_path,
                   const std::string& out_dir_flag) {
  const PolicyTable policy = parse_policy_csv(read_file(policy_path));
  const std::vector<double> p = parse_real_list(read_file(p_path));
  if (p.size() != policy.m)
    throw ConfigError("probability vector length does not match policy table");

  const fs::path out_dir = out_dir_flag.empty() ? fs::path(".") : fs::path(out_dir_flag);
  const Matrix joint = build_joint(policy, p);
  const Matrix reduced = build_reduced(policy, p);
  write_file(out_dir / "joint.csv", matrix_csv(joint));
  write_file(out_dir / "reduced.csv", matrix_csv(reduced));

  const LiftReport lift = verify_lift(policy, p);  // throws on non-unique stationary
  write_file(out_dir / "pi_joint.csv", vector_csv(lift.joint_pi));
  write_file(out_dir / "pi_reduced.csv", vector_csv(lift.reduced_pi));

  const double p_eff = effective_p(p, lift.reduced_pi);
  std::string report = "{\n  \"max_deviation\": " + format_real(lift.max_deviation) +
                       ",\n  \"within_tol\": " + (lift.within_tol ? "true" : "false") +
                       ",\n  \"effective_p\": " + format_real(p_eff) + "\n}\n";
  write_file(out_dir / "lift.json", report);

  std::cout << "lift max deviation: " << format_real(lift.max_deviation) << "\n"
            << "effective_p: " << format_real(p_eff) << "\n";
  return 0;
}

int cmd_dp_compare(int m, int horizon, const std::string& p_csv, int runs, bool seed_given,
                   std::uint64_t seed, const std::string& out_path) {
  HorizonSpec spec;
  spec.m = static_cast<std::size_t>(m);
  spec.horizon = horizon;
  spec.p = parse_real_list(p_csv);
  std::vector<double> cells(spec.m, 1.0 / static_cast<double>(spec.m));
  spec.p.resize(spec.p.size());  // keep as parsed; validate() checks the length
  spec.initial = joint_initial_from_cells(cells, spec.p);
  spec.validate();

  const std::uint64_t master = resolve_seed(seed_given, seed, 42);
  const GreedyGapReport report = greedy_gap(spec, runs, master);

  std::string body = "{\n  \"optimal_cost\": " + format_real(report.optimal_cost) +
                     ",\n  \"greedy_mean\": " + format_real(report.greedy_mean) +
                     ",\n  \"greedy_stderr\": " + format_real(report.greedy_stderr) +
                     ",\n  \"gap\": " + format_real(report.gap) +
                     ",\n  \"runs\": " + std::to_string(report.runs) + "\n}\n";
  if (!out_path.empty()) write_file(out_path, body);

  std::cout << "optimal_cost=" << format_real(report.optimal_cost)
            << " greedy_mean=" << format_real(report.greedy_mean)
            << " stderr=" << format_real(report.greedy_stderr)
            << " gap=" << format_real(report.gap) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active safe-region learning simulator"};
  app.require_subcommand(1);

  std::string config_path, input_path, out_path, policy_path, p_path, p_csv;
  std::uint64_t seed = 42;
  int replications = 0, jobs = 1, points = 99, m = 2, horizon = 8, runs = 10000;
  double eps = 0.5;

  auto* simulate = app.add_subcommand("simulate", "run the learning experiment");
  simulate->add_option("--config", config_path, "experiment config (defaults to the built-in preset)");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--replications", replications, "override replication count");
  simulate->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_path, "output directory");

  auto* classify_cmd = app.add_subcommand("classify", "threshold and label from (cell,c,p) rows");
  classify_cmd->add_option("--input", input_path, "CSV with header cell,c,p")->required();
  classify_cmd->add_option("--out", out_path, "classification JSON output path");

  auto* rate = app.add_subcommand("rate-curve", "emit -I(eps, p) over a grid as CSV");
  rate->add_option("--eps", eps, "error bound in (0,1)");
  rate->add_option("--points", points, "grid size")->check(CLI::Range(2, 1000000));
  rate->add_option("--out", out_path, "CSV output path (default stdout)");

  auto* stat = app.add_subcommand("stationary", "chain matrices, stationary distributions, lift check");
  stat->add_option("--policy", policy_path, "policy CSV, 2m rows x m cols")->required();
  stat->add_option("--p", p_path, "per-cell probabilities file")->required();
  stat->add_option("--out", out_path, "output directory (default .)");

  auto* dp = app.add_subcommand("dp-compare", "greedy vs exhaustive stationary optimum");
  dp->add_option("--m", m, "cell count (1..3)");
  dp->add_option("--horizon", horizon, "decision horizon (1..14)");
  dp->add_option("--p", p_csv, "comma-separated true probabilities")->required();
  dp->add_option("--runs", runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
  dp->add_option("--seed", seed, "master seed");
  dp->add_option("--out", out_path, "report JSON output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return cmd_simulate(config_path, simulate->count("--seed") > 0, seed, replications, jobs,
                          out_path);
    if (classify_cmd->parsed()) return cmd_classify(input_path, out_path);
    if (rate->parsed()) return cmd_rate_curve(eps, points, out_path);
    if (stat->parsed()) return cmd_stationary(policy_path, p_path, out_path);
    if (dp->parsed())
      return cmd_dp_compare(m, horizon, p_csv, runs, dp->count("--seed") > 0, seed, out_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonUniqueStationaryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
