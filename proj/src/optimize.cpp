#include "tlmine/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tlmine/formula.hpp"

namespace tlmine {

double Priority::operator()(std::span<const double> theta) const {
  switch (kind) {
    case Kind::WeightedSum: {
      if (weights.size() != theta.size()) {
        throw std::invalid_argument("priority: weight dimension mismatch");
      }
      double s = 0.0;
      for (std::size_t k = 0; k < theta.size(); ++k) s += weights[k] * theta[k];
      return s;
    }
    case Kind::Norm: {
      double s = 0.0;
      for (double v : theta) s += v * v;
      return std::sqrt(s);
    }
    case Kind::Single:
      if (index >= theta.size()) {
        throw std::invalid_argument("priority: coordinate out of range");
      }
      return theta[index];
    case Kind::Max: {
      double s = -kInf;
      for (double v : theta) s = std::max(s, v);
      return s;
    }
    case Kind::Min: {
      double s = kInf;
      for (double v : theta) s = std::min(s, v);
      return s;
    }
  }
  throw std::logic_error("priority: unreachable");
}

double Priority::penalty_magnitude(std::size_t dim) const {
  std::vector<double> ones(dim, 1.0);
  double top = (*this)(ones);
  if (kind == Kind::Norm) return top;
  std::vector<double> zeros(dim, 0.0);
  return (top - (*this)(zeros)) + 1.0;
}

double cost_min(double f_theta, double gamma_mag, double rob) {
  return rob >= 0.0 ? f_theta + gamma_mag + rob : f_theta;
}

double cost_max(double f_theta, double gamma_mag, double rob) {
  return rob >= 0.0 ? f_theta - gamma_mag - rob : f_theta;
}

double ray_cost(double c, double c_max, std::size_t dim, double rob) {
  if (rob < 0.0) return c;
  double penalty = std::max(std::sqrt(static_cast<double>(dim)), c_max) + 1.0;
  return c - penalty - rob;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

bool improves(double cost, double best, Direction dir, bool has_best) {
  if (!has_best) return true;
  return dir == Direction::Minimize ? cost < best : cost > best;
}

std::vector<double> draw_uniform(const Box& domain, std::mt19937_64& rng) {
  std::vector<double> p(domain.dim());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (domain.upper[k] > domain.lower[k]) {
      p[k] = std::uniform_real_distribution<double>(domain.lower[k],
                                                    domain.upper[k])(rng);
    } else {
      p[k] = domain.lower[k];
    }
  }
  return p;
}

// Redraw filtered points a bounded number of times; the caller still
// evaluates the final draw so the budget stays exact.
template <typename DrawFn>
std::vector<double> draw_filtered(const ProposalFilter& filter, DrawFn draw) {
  std::vector<double> p = draw();
  if (!filter) return p;
  for (int attempt = 0; attempt < 32 && filter(p); ++attempt) p = draw();
  return p;
}

std::vector<double> draw_gaussian(const Box& domain,
                                  std::span<const double> center,
                                  double scale, std::mt19937_64& rng) {
  std::vector<double> p(domain.dim());
  for (std::size_t k = 0; k < p.size(); ++k) {
    double range = domain.upper[k] - domain.lower[k];
    if (range <= 0.0) {
      p[k] = domain.lower[k];
      continue;
    }
    double v =
        center[k] + std::normal_distribution<double>(0.0, scale * range)(rng);
    p[k] = std::clamp(v, domain.lower[k], domain.upper[k]);
  }
  return p;
}

void check_args(const Box& domain, const OptimizerConfig& config) {
  domain.validate();
  if (domain.dim() == 0) {
    throw std::invalid_argument("optimize: empty search space");
  }
  if (config.budget == 0) {
    throw std::invalid_argument("optimize: budget must be positive");
  }
}

}  // namespace

OptResult simulated_annealing(const Box& domain, const CostOracle& oracle,
                              Direction direction,
                              const OptimizerConfig& config,
                              const ProposalFilter& filter) {
  check_args(domain, config);
  std::mt19937_64 rng(config.seed);

  OptResult best;
  bool has_best = false;
  std::vector<double> current;
  double current_cost = 0.0;
  std::size_t evals = 0;

  auto evaluate = [&](std::vector<double> point) {
    double cost = oracle(point);
    ++evals;
    if (improves(cost, best.best_cost, direction, has_best)) {
      best.best_point = point;
      best.best_cost = cost;
      has_best = true;
    }
    return std::pair(std::move(point), cost);
  };

  // Warmup: uniform probes sizing the initial temperature.
  const std::size_t warmup = std::min<std::size_t>(
      std::max(config.warmup, 1), config.budget);
  std::vector<double> warm_costs;
  for (std::size_t w = 0; w < warmup; ++w) {
    auto [point, cost] =
        evaluate(draw_filtered(filter, [&] { return draw_uniform(domain, rng); }));
    if (std::isfinite(cost)) warm_costs.push_back(cost);
    bool adopt = current.empty() ||
                 improves(cost, current_cost, direction, true);
    if (adopt) {
      current = point;
      current_cost = cost;
    }
  }

  double init_temp = config.init_temp;
  if (init_temp <= 0.0) {
    // Temperature tracks the cost variation on the better half of the
    // warmup probes: penalized regions can be cliffs several orders
    // steeper than the basin worth exploring, and a cliff-sized
    // temperature would turn the chain into a free random walk.
    double spread = 0.0;
    if (warm_costs.size() >= 2) {
      std::sort(warm_costs.begin(), warm_costs.end());
      double median = warm_costs[warm_costs.size() / 2];
      spread = direction == Direction::Maximize ? warm_costs.back() - median
                                                : median - warm_costs.front();
      if (spread <= 0.0) spread = warm_costs.back() - warm_costs.front();
    }
    init_temp = spread > 0.0 ? 0.1 * spread : 1.0;
  }
  double temp = init_temp;

  // Evenly spaced restart marks, each teleporting the chain to the best.
  std::vector<std::size_t> restart_at;
  int restarts = std::max(config.restarts, 0);
  for (int r = 1; r <= restarts; ++r) {
    restart_at.push_back(config.budget * static_cast<std::size_t>(r) /
                         static_cast<std::size_t>(restarts + 1));
  }

  int since_cool = 0;
  std::size_t leg_start = evals;
  std::size_t next_restart = 0;
  while (next_restart < restart_at.size() &&
         restart_at[next_restart] <= leg_start) {
    ++next_restart;
  }
  std::size_t leg_end = next_restart < restart_at.size()
                            ? restart_at[next_restart]
                            : config.budget;
  while (evals < config.budget) {
    if (next_restart < restart_at.size() &&
        evals == restart_at[next_restart]) {
      // Each restart is an independent annealing leg from a fresh uniform
      // point: reseeding plus re-widened steps escape basins that a chain
      // started near them cannot, while the best found so far is kept
      // aside.
      auto [point, cost] = evaluate(draw_filtered(
          filter, [&] { return draw_uniform(domain, rng); }));
      current = std::move(point);
      current_cost = cost;
      temp = init_temp;
      leg_start = evals;
      ++next_restart;
      leg_end = next_restart < restart_at.size() ? restart_at[next_restart]
                                                 : config.budget;
      continue;
    }
    // Step sizes decay from proposal_scale to 1% of it across each leg, so
    // early proposals traverse the box and late ones refine the incumbent.
    double progress = static_cast<double>(evals - leg_start) /
                      static_cast<double>(std::max<std::size_t>(
                          leg_end - leg_start, 1));
    double scale = config.proposal_scale * std::pow(100.0, -progress);
    auto [point, cost] = evaluate(draw_filtered(filter, [&] {
      return draw_gaussian(domain, current, scale, rng);
    }));
    double delta;
    if (cost == current_cost) {
      delta = 0.0;  // covers matching infinities without NaN
    } else {
      delta = direction == Direction::Minimize ? cost - current_cost
                                               : current_cost - cost;
    }
    bool accept = delta <= 0.0;
    if (!accept) {
      double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      accept = u < std::exp(-delta / temp);
    }
    if (accept) {
      current = std::move(point);
      current_cost = cost;
    }
    if (++since_cool >= std::max(config.batch, 1)) {
      temp *= config.cooling;
      since_cool = 0;
    }
  }
  best.evals = evals;
  return best;
}

OptResult uniform_search(const Box& domain, const CostOracle& oracle,
                         Direction direction, const OptimizerConfig& config,
                         const ProposalFilter& filter) {
  check_args(domain, config);
  std::mt19937_64 rng(config.seed);
  OptResult best;
  bool has_best = false;
  for (std::size_t e = 0; e < config.budget; ++e) {
    auto point =
        draw_filtered(filter, [&] { return draw_uniform(domain, rng); });
    double cost = oracle(point);
    if (improves(cost, best.best_cost, direction, has_best)) {
      best.best_point = std::move(point);
      best.best_cost = cost;
      has_best = true;
    }
  }
  best.evals = config.budget;
  return best;
}

OptResult optimize(const Box& domain, const CostOracle& oracle,
                   Direction direction, const OptimizerConfig& config,
                   const ProposalFilter& filter) {
  switch (config.algorithm) {
    case Algorithm::Sa:
      return simulated_annealing(domain, oracle, direction, config, filter);
    case Algorithm::Uniform:
      return uniform_search(domain, oracle, direction, config, filter);
  }
  throw std::logic_error("optimize: unreachable");
}

}  // namespace tlmine
