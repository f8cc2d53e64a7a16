#include "safescout/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace safescout {

namespace {

using nlohmann::json;

const char* termination_name(Termination t) {
  return t == Termination::active_set_empty ? "active_set_empty" : "iteration_cap";
}

Termination termination_from(const std::string& name) {
  if (name == "active_set_empty") return Termination::active_set_empty;
  if (name == "iteration_cap") return Termination::iteration_cap;
  throw ConfigError("unknown termination status: " + name);
}

const char* reason_name(EliminationReason r) {
  switch (r) {
    case EliminationReason::consecutive_stay: return "consecutive_stay";
    case EliminationReason::estimate_stable: return "estimate_stable";
    default: return "none";
  }
}

EliminationReason reason_from(const std::string& name) {
  if (name == "consecutive_stay") return EliminationReason::consecutive_stay;
  if (name == "estimate_stable") return EliminationReason::estimate_stable;
  throw ConfigError("unknown elimination reason: " + name);
}

const char* route_name(ThresholdRoute r) {
  return r == ThresholdRoute::gap ? "gap" : "median";
}

ThresholdRoute route_from(const std::string& name) {
  if (name == "gap") return ThresholdRoute::gap;
  if (name == "median") return ThresholdRoute::median;
  throw ConfigError("unknown threshold route: " + name);
}

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
}

EnvironmentSpec environment_from_json(const json& doc) {
  EnvironmentSpec env;
  try {
    env.dimension = doc.at("dimension").get<int>();
    for (const auto& row : doc.at("centers")) {
      Point pt;
      for (const auto& coord : row) pt.coords.push_back(coord.get<double>());
      env.centers.push_back(std::move(pt));
    }
    for (const auto& p : doc.at("true_p")) env.true_p.push_back(p.get<double>());
  } catch (const json::exception& e) {
    fail(std::string("bad environment document: ") + e.what());
  }
  return env;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_real_hi(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Environment and experiment configuration

std::string serialize_environment(const EnvironmentSpec& env) {
  std::string out = "{\n  \"dimension\": " + std::to_string(env.dimension) + ",\n  \"centers\": [";
  for (std::size_t j = 0; j < env.centers.size(); ++j) {
    out += j == 0 ? "[" : ", [";
    for (std::size_t i = 0; i < env.centers[j].coords.size(); ++i) {
      if (i) out += ", ";
      out += format_real(env.centers[j].coords[i]);
    }
    out += "]";
  }
  out += "],\n  \"true_p\": [";
  for (std::size_t j = 0; j < env.true_p.size(); ++j) {
    if (j) out += ", ";
    out += format_real(env.true_p[j]);
  }
  out += "]\n}\n";
  return out;
}

EnvironmentSpec parse_environment(const std::string& json_text) {
  return environment_from_json(parse_json(json_text));
}

ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir) {
  const json doc = parse_json(json_text);
  ExperimentConfig config;
  try {
    const json& env_node = doc.at("environment");
    if (env_node.is_string()) {
      const std::filesystem::path path = base_dir / env_node.get<std::string>();
      std::ifstream in(path);
      if (!in) fail("environment file not found: " + path.string());
      std::stringstream buffer;
      buffer << in.rdbuf();
      config.environment = parse_environment(buffer.str());
    } else {
      config.environment = environment_from_json(env_node);
    }

    const json& learner = doc.at("learner");
    config.learner.policy.delta = learner.at("delta").get<double>();
    config.learner.policy.n_delta = learner.at("n_delta").get<std::uint64_t>();
    config.learner.policy.n_max = learner.at("n_max").get<std::uint64_t>();
    config.learner.policy.tie_tolerance = learner.value("tie_tolerance", 1e-9);
    config.learner.seed = learner.value("seed", std::uint64_t{42});
    config.learner.max_iterations = learner.value("max_iterations", std::uint64_t{0});
    if (learner.contains("initial_cell") && !learner.at("initial_cell").is_null()) {
      const auto cell = learner.at("initial_cell").get<std::uint64_t>();
      if (cell < 1 || cell > config.environment.cell_count())
        fail("initial_cell out of range");
      config.learner.initial_cell = static_cast<std::size_t>(cell - 1);
    }

    config.replications = doc.value("replications", 1);
    config.output_dir = doc.value("output_dir", std::string("out"));
  } catch (const json::exception& e) {
    fail(std::string("bad experiment config: ") + e.what());
  }

  const auto violations = validate(config.environment);
  if (!violations.empty()) fail("invalid environment: " + violations.front());
  if (config.replications < 1) fail("replications must be >= 1");
  if (!(config.learner.policy.delta > 0.0 && config.learner.policy.delta < 1.0))
    fail("delta must be in (0,1)");
  if (config.learner.policy.n_delta == 0 || config.learner.policy.n_max == 0)
    fail("n_delta and n_max must be positive");
  const std::uint64_t floor =
      config.environment.cell_count() * (config.learner.policy.n_delta + 1);
  if (config.learner.max_iterations > 0 && config.learner.max_iterations < floor)
    fail("max_iterations below m*(n_delta+1)");
  return config;
}

std::string serialize_experiment_config(const ExperimentConfig& config) {
  std::string out = "{\n\"environment\": ";
  std::string env = serialize_environment(config.environment);
  while (!env.empty() && env.back() == '\n') env.pop_back();
  out += env;
  out += ",\n\"learner\": {\n";
  out += "  \"delta\": " + format_real(config.learner.policy.delta) + ",\n";
  out += "  \"n_delta\": " + std::to_string(config.learner.policy.n_delta) + ",\n";
  out += "  \"n_max\": " + std::to_string(config.learner.policy.n_max) + ",\n";
  out += "  \"tie_tolerance\": " + format_real(config.learner.policy.tie_tolerance) + ",\n";
  out += "  \"seed\": " + std::to_string(config.learner.seed) + ",\n";
  out += "  \"max_iterations\": " + std::to_string(config.learner.max_iterations) + ",\n";
  out += "  \"initial_cell\": ";
  out += config.learner.initial_cell ? std::to_string(*config.learner.initial_cell + 1) : "null";
  out += "\n},\n";
  out += "\"replications\": " + std::to_string(config.replications) + ",\n";
  out += "\"output_dir\": \"" + config.output_dir + "\"\n}\n";
  return out;
}

ExperimentConfig table1_preset() {
  ExperimentConfig config;
  config.environment.dimension = 2;
  for (double y : {0.0, 2.0, 4.0})
    for (double x : {0.0, 2.0, 4.0}) config.environment.centers.push_back({{x, y}});
  config.environment.true_p = {0.9, 0.84, 0.58, 0.79, 0.6, 0.75, 0.54, 0.72, 0.56};
  config.learner.policy = PolicyConfig{0.02, 250, 50, 1e-9};
  config.learner.seed = 42;
  config.learner.max_iterations = 0;
  config.replications = 1;
  config.output_dir = "out";
  return config;
}

// ---------------------------------------------------------------------------
// Run logs

std::string serialize_run_log(const RunLog& log) {
  std::string out;
  for (const StepRecord& step : log.steps) {
    out += "{\"type\":\"step\",\"n\":" + std::to_string(step.iteration) +
           ",\"cell\":" + std::to_string(step.cell + 1) +
           ",\"y\":" + std::to_string(step.observation) +
           ",\"estimate\":" + format_real(step.estimate);
    if (step.elimination)
      out += std::string(",\"elimination\":\"") + reason_name(step.elimination->reason) + "\"";
    out += "}\n";
  }
  out += "{\"type\":\"final\",\"m\":" + std::to_string(log.final_cells.size()) +
         ",\"terminated\":\"" + termination_name(log.terminated) + "\",\"cells\":[";
  bool first = true;
  for (std::size_t k = 0; k < log.final_cells.size(); ++k) {
    if (!log.final_cells[k]) continue;
    const CellFinal& final = *log.final_cells[k];
    if (!first) out += ",";
    first = false;
    out += "{\"cell\":" + std::to_string(k + 1) + ",\"n_k\":" + std::to_string(final.n_k) +
           ",\"visits\":" + std::to_string(final.visits) + ",\"p\":" + format_real(final.p_final) +
           ",\"c\":" + format_real(final.c_k) + "}";
  }
  out += "]}\n";
  return out;
}

RunLog parse_run_log(const std::string& text) {
  RunLog log;
  bool saw_final = false;
  for (const std::string& line : split_lines(text)) {
    const json rec = parse_json(line);
    try {
      const std::string type = rec.at("type").get<std::string>();
      if (type == "step") {
        if (saw_final) fail("run log: step after final record");
        StepRecord step;
        step.iteration = rec.at("n").get<std::uint64_t>();
        step.cell = rec.at("cell").get<std::size_t>() - 1;
        step.observation = rec.at("y").get<int>();
        step.estimate = rec.at("estimate").get<double>();
        if (rec.contains("elimination"))
          step.elimination =
              EliminationEvent{step.cell, reason_from(rec.at("elimination").get<std::string>())};
        log.steps.push_back(step);
      } else if (type == "final") {
        saw_final = true;
        const std::size_t m = rec.at("m").get<std::size_t>();
        log.final_cells.assign(m, std::nullopt);
        log.terminated = termination_from(rec.at("terminated").get<std::string>());
        for (const auto& cell : rec.at("cells")) {
          const std::size_t k = cell.at("cell").get<std::size_t>() - 1;
          if (k >= m) fail("run log: final cell index out of range");
          log.final_cells[k] =
              CellFinal{cell.at("n_k").get<std::uint64_t>(), cell.at("visits").get<std::uint64_t>(),
                        cell.at("p").get<double>(), cell.at("c").get<double>()};
        }
      } else {
        fail("run log: unknown record type " + type);
      }
    } catch (const json::exception& e) {
      fail(std::string("bad run log record: ") + e.what());
    }
  }
  if (!saw_final) fail("run log: missing final record");
  return log;
}

// ---------------------------------------------------------------------------
// Tables

std::string rate_curve_csv(const RateCurve& curve) {
  std::string out = "p,neg_rate\n";
  for (const auto& [p, value] : curve.grid)
    out += format_real(p) + "," + format_real(value) + "\n";
  return out;
}

std::string matrix_csv(const Matrix& matrix) {
  std::string out;
  for (std::size_t r = 0; r < matrix.rows; ++r) {
    for (std::size_t c = 0; c < matrix.cols; ++c) {
      if (c) out += ",";
      out += format_real_hi(matrix.at(r, c));
    }
    out += "\n";
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::stringstream stream(normalized);
  std::vector<double> values;
  double v = 0.0;
  while (stream >> v) values.push_back(v);
  if (!stream.eof()) fail("trailing garbage in numeric list");
  return values;
}

std::string vector_csv(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_real(values[i]);
  }
  out += "\n";
  return out;
}

PolicyTable parse_policy_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines.size() % 2 != 0) fail("policy table must have 2m rows");
  const std::size_t m = lines.size() / 2;
  PolicyTable policy(m);
  for (std::size_t row = 0; row < lines.size(); ++row) {
    const std::vector<double> entries = parse_real_list(lines[row]);
    if (entries.size() != m) fail("policy row has wrong number of columns");
    const std::size_t k = row % m;
    const int u = row < m ? 1 : 0;
    for (std::size_t l = 0; l < m; ++l) policy.at(k, u, l) = entries[l];
  }
  const auto violations = policy.validate();
  if (!violations.empty()) fail("invalid policy table: " + violations.front());
  return policy;
}

std::string policy_csv(const PolicyTable& policy) {
  std::string out;
  for (int u = 1; u >= 0; --u) {
    for (std::size_t k = 0; k < policy.m; ++k) {
      for (std::size_t l = 0; l < policy.m; ++l) {
        if (l) out += ",";
        out += format_real_hi(policy.at(k, u, l));
      }
      out += "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification documents

std::vector<CellMeasure> parse_cell_measures_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines.front() != "cell,c,p")
    fail("expected header 'cell,c,p'");
  if (lines.size() < 3) fail("need at least 2 cells");

  std::vector<CellMeasure> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<double> fields = parse_real_list(lines[i]);
    if (fields.size() != 3) fail("expected 3 fields per row");
    const double id = fields[0];
    if (id < 1 || id != std::floor(id)) fail("cell id must be a positive integer");
    rows.push_back({static_cast<std::size_t>(id) - 1, fields[1], fields[2]});
  }

  const std::size_t m = rows.size();
  std::vector<CellMeasure> ordered(m);
  std::vector<bool> seen(m, false);
  for (const CellMeasure& row : rows) {
    if (row.cell >= m || seen[row.cell]) fail("cell ids must be a permutation of 1..m");
    seen[row.cell] = true;
    ordered[row.cell] = row;
  }
  return ordered;
}

std::string serialize_classification(const ClassificationResult& result,
                                     std::span<const double> c_values,
                                     std::span<const double> estimates) {
  const ThresholdResult& th = result.threshold;
  std::string out = "{\n";
  out += "\"m\": " + std::to_string(c_values.size()) + ",\n";
  out += "\"c_threshold\": " + format_real(th.c_threshold) + ",\n";
  out += std::string("\"route\": \"") + route_name(th.route) + "\",\n";
  out += "\"k_star\": " + std::to_string(th.k_star) + ",\n";
  out += "\"sorted_cells\": [";
  for (std::size_t i = 0; i < th.sort_order.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(th.sort_order[i] + 1);
  }
  out += "],\n\"gaps\": [";
  for (std::size_t i = 0; i < th.gaps.size(); ++i) {
    if (i) out += ",";
    out += format_real(th.gaps[i]);
  }
  out += "],\n\"cells\": [\n";
  for (std::size_t k = 0; k < c_values.size(); ++k) {
    out += "  {\"cell\": " + std::to_string(k + 1) + ", \"c\": " + format_real(c_values[k]) +
           ", \"p\": " + format_real(estimates[k]) + ", \"label\": \"" +
           (result.safe[k] ? "safe" : "unsafe") + "\"}";
    out += k + 1 < c_values.size() ? ",\n" : "\n";
  }
  out += "],\n\"safe_set\": [";
  for (std::size_t i = 0; i < result.safe_set.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(result.safe_set[i] + 1);
  }
  out += "]\n}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Experiment report

std::string serialize_report(const ExperimentReport& report) {
  std::string out = "{\n\"replications\": [\n";
  for (std::size_t r = 0; r < report.replications.size(); ++r) {
    const ReplicationSummary& rep = report.replications[r];
    out += "{\"index\": " + std::to_string(rep.index) +
           ", \"oracle_seed\": " + std::to_string(rep.oracle_seed) +
           ", \"policy_seed\": " + std::to_string(rep.policy_seed) + ", \"terminated\": \"" +
           termination_name(rep.terminated) +
           "\", \"iterations\": " + std::to_string(rep.iterations) + ",\n \"cells\": [\n";
    for (std::size_t k = 0; k < rep.cells.size(); ++k) {
      const CellOutcome& cell = rep.cells[k];
      out += "  {\"cell\": " + std::to_string(cell.cell + 1) +
             ", \"visits\": " + std::to_string(cell.visits);
      out += ", \"n_k\": " + (cell.n_k ? std::to_string(*cell.n_k) : "null");
      out += ", \"p\": " + (cell.p_final ? format_real(*cell.p_final) : "null");
      out += ", \"c\": " + (cell.c_k ? format_real(*cell.c_k) : "null");
      out += ", \"label\": ";
      out += cell.safe ? (std::string("\"") + (*cell.safe ? "safe" : "unsafe") + "\"") : "null";
      out += "}";
      out += k + 1 < rep.cells.size() ? ",\n" : "\n";
    }
    out += " ],\n ";
    out += "\"c_threshold\": " + (rep.c_threshold ? format_real(*rep.c_threshold) : "null");
    out += ", \"route\": ";
    out += rep.route ? (std::string("\"") + route_name(*rep.route) + "\"") : "null";
    out += ", \"k_star\": " + (rep.k_star ? std::to_string(*rep.k_star) : "null");
    out += ", \"safe_set\": [";
    for (std::size_t i = 0; i < rep.safe_set.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(rep.safe_set[i] + 1);
    }
    out += "], \"unsafe_visits\": " + std::to_string(rep.unsafe_visits) + "}";
    out += r + 1 < report.replications.size() ? ",\n" : "\n";
  }
  out += "],\n\"aggregate\": {\n";
  const AggregateStats& agg = report.aggregate;
  out += "  \"runs\": " + std::to_string(agg.runs) + ",\n";
  out += std::string("  \"all_terminated\": ") + (agg.all_terminated ? "true" : "false") + ",\n";
  out += "  \"safe_frequency\": [";
  for (std::size_t i = 0; i < agg.safe_frequency.size(); ++i) {
    if (i) out += ",";
    out += format_real(agg.safe_frequency[i]);
  }
  out += "],\n  \"modal_safe_set\": [";
  for (std::size_t i = 0; i < agg.modal_safe_set.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(agg.modal_safe_set[i] + 1);
  }
  out += "],\n  \"modal_safe_set_frequency\": " + format_real(agg.modal_safe_set_frequency) +
         ",\n";
  out += "  \"error_q50\": " + format_real(agg.error_q50) + ",\n";
  out += "  \"error_q90\": " + format_real(agg.error_q90) + ",\n";
  out += "  \"error_max\": " + format_real(agg.error_max) + "\n}\n}\n";
  return out;
}

ExperimentReport parse_report(const std::string& json_text) {
  const json doc = parse_json(json_text);
  ExperimentReport report;
  try {
    for (const auto& rep_node : doc.at("replications")) {
      ReplicationSummary rep;
      rep.index = rep_node.at("index").get<int>();
      rep.oracle_seed = rep_node.at("oracle_seed").get<std::uint64_t>();
      rep.policy_seed = rep_node.at("policy_seed").get<std::uint64_t>();
      rep.terminated = termination_from(rep_node.at("terminated").get<std::string>());
      rep.iterations = rep_node.at("iterations").get<std::uint64_t>();
      for (const auto& cell_node : rep_node.at("cells")) {
        CellOutcome cell;
        cell.cell = cell_node.at("cell").get<std::size_t>() - 1;
        cell.visits = cell_node.at("visits").get<std::uint64_t>();
        if (!cell_node.at("n_k").is_null()) cell.n_k = cell_node.at("n_k").get<std::uint64_t>();
        if (!cell_node.at("p").is_null()) cell.p_final = cell_node.at("p").get<double>();
        if (!cell_node.at("c").is_null()) cell.c_k = cell_node.at("c").get<double>();
        if (!cell_node.at("label").is_null())
          cell.safe = cell_node.at("label").get<std::string>() == "safe";
        rep.cells.push_back(cell);
      }
      if (!rep_node.at("c_threshold").is_null())
        rep.c_threshold = rep_node.at("c_threshold").get<double>();
      if (!rep_node.at("route").is_null())
        rep.route = route_from(rep_node.at("route").get<std::string>());
      if (!rep_node.at("k_star").is_null())
        rep.k_star = rep_node.at("k_star").get<std::size_t>();
      for (const auto& cell : rep_node.at("safe_set"))
        rep.safe_set.push_back(cell.get<std::size_t>() - 1);
      rep.unsafe_visits = rep_node.at("unsafe_visits").get<std::uint64_t>();
      report.replications.push_back(std::move(rep));
    }
    const json& agg = doc.at("aggregate");
    report.aggregate.runs = agg.at("runs").get<int>();
    report.aggregate.all_terminated = agg.at("all_terminated").get<bool>();
    for (const auto& v : agg.at("safe_frequency"))
      report.aggregate.safe_frequency.push_back(v.get<double>());
    for (const auto& v : agg.at("modal_safe_set"))
      report.aggregate.modal_safe_set.push_back(v.get<std::size_t>() - 1);
    report.aggregate.modal_safe_set_frequency = agg.at("modal_safe_set_frequency").get<double>();
    report.aggregate.error_q50 = agg.at("error_q50").get<double>();
    report.aggregate.error_q90 = agg.at("error_q90").get<double>();
    report.aggregate.error_max = agg.at("error_max").get<double>();
  } catch (const json::exception& e) {
    fail(std::string("bad report document: ") + e.what());
  }
  return report;
}

}  // namespace safescout
