#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlmine/mining.hpp"

namespace tlmine {

struct PriorityConfig {
  std::string kind = "norm";  // norm | weighted_sum | max | min | single
  std::vector<double> weights;
  std::size_t index = 0;
};

struct RgdaConfig {
  std::size_t iterations = 10;
};

struct SdaConfig {
  double epsilon = 0.0;
  std::vector<double> bias;  // empty: all ones
  std::size_t max_positions = 100;
};

struct SweepConfig {
  std::vector<std::size_t> counts;  // grid points per parameter
  std::vector<double> x0;           // empty: box midpoint
  std::vector<double> lambda;       // empty: bounds midpoint
  std::size_t max_points = 1000000;
};

struct RobustnessConfig {
  std::string trace;
  bool series = false;
};

// One JSON document drives every command; unknown keys are ignored.
// Schema (defaults in parentheses):
//   system: "ramp" | "hs" | "surrogate_at" | "replay"
//   manifest: path, replay only
//   formula: specification text
//   parameters: {names: [...], lower: [...], upper: [...]}   (none)
//   assume_monotone: -1|0|1 (0), rho_bool: number (1.0)
//   seed: integer (0), jobs: integer (1), out: directory ("")
//   volume_samples: integer (100000)
//   optimizer: {algorithm: "sa"|"uniform", budget (100), init_temp,
//               cooling, proposal_scale, restarts, warmup, batch}
//   priority: {kind, weights, index}
//   search: {x0: {lower, upper},
//            inputs: [{name, times, lower, upper, interp: "pc"|"pl"}]}
//   rgda: {iterations}
//   sda: {epsilon, bias, max_positions}
//   sweep: {counts, x0, lambda, max_points}
//   robustness: {trace, series}
struct RunConfig {
  std::string system;
  std::string manifest;
  std::string formula;
  ParamSpace params;
  int assume_monotone = 0;
  EvalOptions eval;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
  std::size_t volume_samples = 100000;
  OptimizerConfig optimizer;
  PriorityConfig priority;
  std::optional<Box> x0_override;
  std::optional<InputParameterization> inputs_override;
  RgdaConfig rgda;
  SdaConfig sda;
  SweepConfig sweep;
  RobustnessConfig robustness;
};

RunConfig parse_run_config(const std::string& json_text);
// Errors from parsing or validation are rethrown with the path prepended.
RunConfig load_run_config(const std::string& path);

SystemModel make_system(const RunConfig& config);

// Assembles the mining problem: the named system, the parsed formula, the
// declared parameter space, and the system's search space with any
// overrides applied.
MiningProblem make_problem(const RunConfig& config);

Priority make_priority(const PriorityConfig& config, std::size_t dim);

}  // namespace tlmine
