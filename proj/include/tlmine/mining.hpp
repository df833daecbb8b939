#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tlmine/optimize.hpp"
#include "tlmine/params.hpp"
#include "tlmine/robustness.hpp"
#include "tlmine/system.hpp"

namespace tlmine {

// Everything needed to reproduce one falsifying simulation.
struct Witness {
  std::vector<double> x0;
  std::vector<double> lambda;
  double robustness = kInf;
  std::uint64_t seed = 0;
  int iteration = 0;
};

struct AnchorRecord {
  std::vector<double> theta_norm;
  std::vector<double> theta_raw;
  Witness witness;
};

// Union of dominance orthants over normalized parameter space. With
// monotonicity +1 an anchor a covers {theta <= a}, with -1 it covers
// {theta >= a}. Anchors form an antichain: inserts drop dominated ones and
// are ignored when already covered. Every anchor carries a witness with
// robustness <= 0; insert() rejects anything else.
class FalsificationDomain {
 public:
  explicit FalsificationDomain(int monotonicity = 1);

  int monotonicity() const { return mono_; }
  const std::vector<AnchorRecord>& anchors() const { return anchors_; }
  bool empty() const { return anchors_.empty(); }

  // True when theta lies in some anchor's orthant (closed test).
  bool contains(std::span<const double> theta_norm) const;
  // True only strictly inside an orthant; used to skip known-falsified
  // proposals without new simulations.
  bool contains_strict(std::span<const double> theta_norm) const;

  void insert(AnchorRecord anchor);

  // Monte Carlo estimate of the covered fraction of [0,1]^dim.
  double volume(std::size_t samples, std::uint64_t seed) const;

 private:
  int mono_;
  std::vector<AnchorRecord> anchors_;
};

// One mining task: a plant, a parameterized specification over its output
// channels, the parameter domain, and the search freedom for inputs and
// initial conditions.
struct MiningProblem {
  SystemModel system;
  Formula formula;
  ParamSpace params;
  SearchSpace search;
  // Direction override for formulas the analyzer cannot classify; 0 defers
  // to the analysis.
  int assume_monotone = 0;
  EvalOptions eval;
};

// Resolved search direction; throws std::invalid_argument when the
// analysis yields 0 and no override is given.
int resolve_monotonicity(const MiningProblem& problem);

// One simulation per row, in a deterministic order.
struct SimRecord {
  int iteration = 0;
  std::vector<double> x0;
  std::vector<double> lambda;
  std::vector<double> theta_raw;
  double robustness = kInf;
};
using SimLog = std::vector<SimRecord>;

struct MineResult {
  std::vector<double> theta_raw;
  std::vector<double> theta_norm;
  double gamma = kInf;     // robustness of the best sample
  bool falsified = false;  // gamma <= 0
  Witness witness;
  TimedStateSequence trace;
};

// Single-shot falsification-parameter search: penalized annealing over the
// joint space (x0, lambda, normalized theta). Monotonicity +1 maximizes
// the priority, -1 minimizes it, so the best falsifying sample sits at the
// far edge of its dominance orthant. Runs exactly config.budget
// simulations.
MineResult mine(const MiningProblem& problem, const Priority& priority,
                const OptimizerConfig& config, int iteration = 0,
                SimLog* log = nullptr);

struct RayResult {
  double c = 0.0;
  MineResult found;
};

// Farthest falsifying travel along bias from a normalized position: theta
// ranges over position + c * bias (monotonicity +1) or position - c * bias
// (-1) clipped to the unit box, c maximized jointly with (x0, lambda).
// Proposals strictly inside `known` are redrawn without simulating.
RayResult mine_ray(const MiningProblem& problem,
                   std::span<const double> position,
                   std::span<const double> bias,
                   const OptimizerConfig& config,
                   const FalsificationDomain* known = nullptr,
                   int iteration = 0, SimLog* log = nullptr);

// Coordinate mixtures of theta_star and position, excluding the two pure
// vectors, deduplicated within 1e-9. Empty when the points differ in
// fewer than two coordinates.
std::vector<std::vector<double>> generate_markers(
    std::span<const double> theta_star, std::span<const double> position);

struct MiningOutcome {
  FalsificationDomain domain;
  std::vector<AnchorRecord> found;  // chronological, before pruning
  std::size_t positions = 0;
  std::size_t waves = 0;
};

struct RgdaOptions {
  std::size_t iterations = 0;
  OptimizerConfig optimizer;
  int jobs = 1;
};

// Random-gradient-descent exploration: each iteration draws a weight
// vector uniformly from [0,1]^dim, mines with the weighted-sum priority,
// and on falsification inserts the mined parameter point as a dominance
// anchor. Iteration i uses the RNG stream derive_seed(seed, i), so results
// do not depend on the number of worker threads.
MiningOutcome rgda(const MiningProblem& problem, const RgdaOptions& options,
                   std::uint64_t seed, SimLog* log = nullptr);

struct SdaOptions {
  OptimizerConfig optimizer;
  std::vector<double> bias;  // nonnegative, nonzero, normalized space
  double epsilon = 0.0;      // marker-spread termination threshold
  std::size_t max_positions = 0;
  int jobs = 1;
};

// Structured diagonal exploration: waves of ray searches launched from
// pending positions (initially the all-zeros corner for monotonicity +1,
// all-ones for -1). Each success anchors its marker and schedules the
// marker/position coordinate mixtures for the next wave. Within a wave,
// positions see the domain as of the wave start and insertions are applied
// in position order. Stops when a wave yields no new positions, when the
// new positions' maximum pairwise distance falls below epsilon, or when
// max_positions ray searches have run.
MiningOutcome sda(const MiningProblem& problem, const SdaOptions& options,
                  std::uint64_t seed, SimLog* log = nullptr);

// Recomputed robustness per anchor, re-simulating each witness; a sound
// domain yields values <= 0 that match the stored ones.
std::vector<double> replay_witness_robustness(
    const MiningProblem& problem, const FalsificationDomain& domain);

}  // namespace tlmine
