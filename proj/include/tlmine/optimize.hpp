#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tlmine/system.hpp"

namespace tlmine {

// Scalarization over normalized parameter vectors.
struct Priority {
  enum class Kind : unsigned char { WeightedSum, Norm, Single, Max, Min };

  Kind kind = Kind::Norm;
  std::vector<double> weights;  // WeightedSum
  std::size_t index = 0;        // Single

  double operator()(std::span<const double> theta) const;

  // Penalty magnitude that makes every falsifying sample beat every
  // non-falsifying one over [0,1]^dim: the norm of the all-ones corner for
  // Norm, otherwise the priority's spread over the box plus one.
  double penalty_magnitude(std::size_t dim) const;
};

// Penalized objectives steering a search toward falsification while
// ordering falsifying samples by the priority. A nonnegative robustness
// activates the penalty; the boundary value 0 is penalized yet still
// counts as falsified by the <= 0 test used elsewhere.
double cost_min(double f_theta, double gamma_mag, double rob);
double cost_max(double f_theta, double gamma_mag, double rob);

// Objective for the ray search: travel c along a bias direction, penalized
// when the sampled trace satisfies the specification. c_max is the largest
// feasible travel, used to keep the penalty above any reachable c.
double ray_cost(double c, double c_max, std::size_t dim, double rob);

enum class Direction : unsigned char { Minimize, Maximize };

enum class Algorithm : unsigned char { Sa, Uniform };

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::Sa;
  std::size_t budget = 0;  // exact number of oracle evaluations, > 0
  std::uint64_t seed = 0;
  // <= 0: 10% of the better-half warmup cost spread.
  double init_temp = 0.0;
  double cooling = 0.9;  // applied once per proposal batch
  // Proposal stddev as a fraction of each range; decays geometrically
  // over the run from this value down to 1% of it.
  double proposal_scale = 0.1;
  int restarts = 1;             // reheated legs from fresh uniform starts
  int warmup = 10;              // uniform samples before annealing
  int batch = 10;               // proposals per cooling step
};

struct OptResult {
  std::vector<double> best_point;
  double best_cost = 0.0;
  std::size_t evals = 0;
};

using CostOracle = std::function<double(std::span<const double>)>;

// Returns true for points that must not be evaluated; the sampler redraws
// (bounded retries) without consuming budget.
using ProposalFilter = std::function<bool(std::span<const double>)>;

// Metropolis annealing over an axis-aligned box: uniform warmup, Gaussian
// proposals clipped to the box, geometric cooling, and reheated restart
// legs begun from fresh uniform draws. Calls the oracle exactly
// config.budget times and is
// bit-reproducible for a fixed seed. The best sample is updated on strict
// improvement only. Throws std::invalid_argument on an empty budget or a
// malformed box.
OptResult simulated_annealing(const Box& domain, const CostOracle& oracle,
                              Direction direction,
                              const OptimizerConfig& config,
                              const ProposalFilter& filter = nullptr);

// Baseline: budget independent uniform samples, best kept.
OptResult uniform_search(const Box& domain, const CostOracle& oracle,
                         Direction direction, const OptimizerConfig& config,
                         const ProposalFilter& filter = nullptr);

OptResult optimize(const Box& domain, const CostOracle& oracle,
                   Direction direction, const OptimizerConfig& config,
                   const ProposalFilter& filter = nullptr);

// Deterministic per-stream seed derivation (splitmix64 mixing), used to
// give each iteration or pending position its own RNG stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace tlmine
