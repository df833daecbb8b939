#include "tlmine/runconfig.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tlmine/parser.hpp"

namespace tlmine {

namespace {

using nlohmann::json;

std::vector<double> as_doubles(const json& j, const char* what) {
  if (!j.is_array())
    throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number())
      throw std::invalid_argument(std::string(what) +
                                  " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

ParamSpace parse_params(const json& j) {
  ParamSpace space;
  space.names = j.at("names").get<std::vector<std::string>>();
  space.lower = as_doubles(j.at("lower"), "parameters.lower");
  space.upper = as_doubles(j.at("upper"), "parameters.upper");
  space.validate();
  return space;
}

OptimizerConfig parse_optimizer(const json& j) {
  OptimizerConfig cfg;
  cfg.budget = 100;
  if (j.is_null()) return cfg;
  std::string algo = j.value("algorithm", std::string("sa"));
  if (algo == "sa")
    cfg.algorithm = Algorithm::Sa;
  else if (algo == "uniform")
    cfg.algorithm = Algorithm::Uniform;
  else
    throw std::invalid_argument("optimizer.algorithm must be sa or uniform");
  cfg.budget = j.value("budget", cfg.budget);
  cfg.init_temp = j.value("init_temp", cfg.init_temp);
  cfg.cooling = j.value("cooling", cfg.cooling);
  cfg.proposal_scale = j.value("proposal_scale", cfg.proposal_scale);
  cfg.restarts = j.value("restarts", cfg.restarts);
  cfg.warmup = j.value("warmup", cfg.warmup);
  cfg.batch = j.value("batch", cfg.batch);
  return cfg;
}

Box parse_box(const json& j, const char* what) {
  Box box;
  box.lower = as_doubles(j.at("lower"), what);
  box.upper = as_doubles(j.at("upper"), what);
  box.validate();
  return box;
}

InputParameterization parse_inputs(const json& j) {
  InputParameterization inputs;
  for (const auto& cj : j) {
    InputChannel ch;
    ch.name = cj.at("name").get<std::string>();
    ch.times = as_doubles(cj.at("times"), "inputs.times");
    ch.lower = as_doubles(cj.at("lower"), "inputs.lower");
    ch.upper = as_doubles(cj.at("upper"), "inputs.upper");
    std::string interp = cj.value("interp", std::string("pc"));
    if (interp == "pc")
      ch.interp = Interp::PiecewiseConstant;
    else if (interp == "pl")
      ch.interp = Interp::PiecewiseLinear;
    else
      throw std::invalid_argument("inputs.interp must be pc or pl");
    inputs.channels.push_back(std::move(ch));
  }
  inputs.validate();
  return inputs;
}

std::vector<std::size_t> as_counts(const json& j) {
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
      throw std::invalid_argument("sweep.counts must be positive integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j = json::parse(json_text);
  RunConfig cfg;
  cfg.system = j.at("system").get<std::string>();
  cfg.manifest = j.value("manifest", std::string());
  cfg.formula = j.at("formula").get<std::string>();
  if (j.contains("parameters")) cfg.params = parse_params(j["parameters"]);
  cfg.assume_monotone = j.value("assume_monotone", 0);
  cfg.eval.rho_bool = j.value("rho_bool", cfg.eval.rho_bool);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.jobs = j.value("jobs", 1);
  cfg.out = j.value("out", std::string());
  cfg.volume_samples = j.value("volume_samples", cfg.volume_samples);
  cfg.optimizer = parse_optimizer(j.contains("optimizer") ? j["optimizer"]
                                                          : json(nullptr));
  if (j.contains("priority")) {
    const json& p = j["priority"];
    cfg.priority.kind = p.value("kind", cfg.priority.kind);
    if (p.contains("weights"))
      cfg.priority.weights = as_doubles(p["weights"], "priority.weights");
    cfg.priority.index = p.value("index", cfg.priority.index);
  }
  if (j.contains("search")) {
    const json& s = j["search"];
    if (s.contains("x0")) cfg.x0_override = parse_box(s["x0"], "search.x0");
    if (s.contains("inputs")) cfg.inputs_override = parse_inputs(s["inputs"]);
  }
  if (j.contains("rgda"))
    cfg.rgda.iterations = j["rgda"].value("iterations", cfg.rgda.iterations);
  if (j.contains("sda")) {
    const json& s = j["sda"];
    cfg.sda.epsilon = s.value("epsilon", cfg.sda.epsilon);
    if (s.contains("bias")) cfg.sda.bias = as_doubles(s["bias"], "sda.bias");
    cfg.sda.max_positions = s.value("max_positions", cfg.sda.max_positions);
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (s.contains("counts")) cfg.sweep.counts = as_counts(s["counts"]);
    if (s.contains("x0")) cfg.sweep.x0 = as_doubles(s["x0"], "sweep.x0");
    if (s.contains("lambda"))
      cfg.sweep.lambda = as_doubles(s["lambda"], "sweep.lambda");
    cfg.sweep.max_points = s.value("max_points", cfg.sweep.max_points);
  }
  if (j.contains("robustness")) {
    const json& r = j["robustness"];
    cfg.robustness.trace = r.value("trace", std::string());
    cfg.robustness.series = r.value("series", false);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_run_config(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

SystemModel make_system(const RunConfig& config) {
  if (config.system == "ramp") return make_ramp_system();
  if (config.system == "hs") return make_hs_system();
  if (config.system == "surrogate_at") return make_surrogate_at_system();
  if (config.system == "replay") {
    if (config.manifest.empty())
      throw std::invalid_argument("replay system needs a manifest path");
    return make_replay_system(config.manifest);
  }
  throw std::invalid_argument("unknown system '" + config.system +
                              "' (ramp, hs, surrogate_at, replay)");
}

MiningProblem make_problem(const RunConfig& config) {
  MiningProblem problem;
  problem.system = make_system(config);
  problem.formula = parse_formula(config.formula, config.params.names);
  problem.params = config.params;
  problem.search = problem.system.space;
  if (config.x0_override) problem.search.x0_box = *config.x0_override;
  if (config.inputs_override) problem.search.inputs = *config.inputs_override;
  problem.assume_monotone = config.assume_monotone;
  problem.eval = config.eval;
  return problem;
}

Priority make_priority(const PriorityConfig& config, std::size_t dim) {
  Priority p;
  if (config.kind == "norm") {
    p.kind = Priority::Kind::Norm;
  } else if (config.kind == "weighted_sum") {
    p.kind = Priority::Kind::WeightedSum;
    p.weights = config.weights;
    if (p.weights.size() != dim)
      throw std::invalid_argument(
          "priority.weights must list one weight per parameter");
  } else if (config.kind == "max") {
    p.kind = Priority::Kind::Max;
  } else if (config.kind == "min") {
    p.kind = Priority::Kind::Min;
  } else if (config.kind == "single") {
    p.kind = Priority::Kind::Single;
    p.index = config.index;
    if (p.index >= dim)
      throw std::invalid_argument("priority.index out of range");
  } else {
    throw std::invalid_argument(
        "priority.kind must be norm, weighted_sum, max, min, or single");
  }
  return p;
}

}  // namespace tlmine
