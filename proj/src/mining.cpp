#include "tlmine/mining.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

namespace tlmine {

namespace {

constexpr double kMarkerTol = 1e-9;

bool near(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::fabs(a[k] - b[k]) > kMarkerTol) return false;
  return true;
}

// Runs body(0..count-1) on up to `jobs` threads; any exception is rethrown
// on the calling thread after all workers join.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body) {
  std::size_t workers =
      count > 1 && jobs > 1
          ? std::min(static_cast<std::size_t>(jobs), count)
          : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto run = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void validate_problem(const MiningProblem& problem) {
  problem.params.validate();
  problem.search.x0_box.validate();
  problem.search.inputs.validate();
  if (problem.params.dim() == 0)
    throw std::invalid_argument("mining: empty parameter space");
  const std::vector<bool> used = problem.formula.params_used();
  for (std::size_t p = 0; p < used.size(); ++p)
    if (used[p] && p >= problem.params.dim())
      throw std::invalid_argument(
          "mining: formula references a parameter outside the space");
}

// Joint search box: initial state block, input block, then `tail` extra
// coordinates in [lo, hi].
Box joint_box(const SearchSpace& search, std::size_t tail, double lo,
              double hi) {
  Box out = search.x0_box;
  Box inputs = search.inputs.bounds();
  out.lower.insert(out.lower.end(), inputs.lower.begin(), inputs.lower.end());
  out.upper.insert(out.upper.end(), inputs.upper.begin(), inputs.upper.end());
  out.lower.insert(out.lower.end(), tail, lo);
  out.upper.insert(out.upper.end(), tail, hi);
  return out;
}

// Shared per-sample bookkeeping for mine and mine_ray: simulate, score,
// log, and keep the best sample (strict improvement, mirroring the
// optimizer's own rule so both agree on ties).
struct BestTracker {
  Direction direction = Direction::Minimize;
  bool has_best = false;
  double best_cost = 0.0;
  MineResult best;

  bool improves(double cost) const {
    if (!has_best) return true;
    return direction == Direction::Maximize ? cost > best_cost
                                            : cost < best_cost;
  }
};

double simulate_sample(const MiningProblem& problem,
                       std::span<const double> x0,
                       std::span<const double> lambda,
                       std::span<const double> theta_raw,
                       TimedStateSequence& trace) {
  Formula ground = instantiate(problem.formula, problem.params, theta_raw);
  trace = problem.system.simulate(x0, lambda);
  return robustness(ground, trace, 0, problem.eval);
}

void log_sample(SimLog* log, int iteration, std::span<const double> x0,
                std::span<const double> lambda,
                const std::vector<double>& theta_raw, double rob) {
  if (!log) return;
  log->push_back(SimRecord{iteration,
                           {x0.begin(), x0.end()},
                           {lambda.begin(), lambda.end()},
                           theta_raw,
                           rob});
}

void record_best(BestTracker& tracker, double cost,
                 std::span<const double> x0, std::span<const double> lambda,
                 std::vector<double> theta_raw, std::vector<double> theta_norm,
                 double rob, TimedStateSequence trace, std::uint64_t seed,
                 int iteration) {
  tracker.has_best = true;
  tracker.best_cost = cost;
  MineResult& r = tracker.best;
  r.theta_raw = std::move(theta_raw);
  r.theta_norm = std::move(theta_norm);
  r.gamma = rob;
  r.falsified = rob <= 0.0;
  r.witness = Witness{{x0.begin(), x0.end()},
                      {lambda.begin(), lambda.end()},
                      rob,
                      seed,
                      iteration};
  r.trace = std::move(trace);
}

double max_pairwise_distance(const std::vector<std::vector<double>>& points) {
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < points[i].size(); ++k) {
        double d = points[i][k] - points[j][k];
        d2 += d * d;
      }
      best = std::max(best, std::sqrt(d2));
    }
  return best;
}

}  // namespace

FalsificationDomain::FalsificationDomain(int monotonicity)
    : mono_(monotonicity) {
  if (mono_ != 1 && mono_ != -1)
    throw std::invalid_argument(
        "FalsificationDomain: monotonicity must be +1 or -1");
}

bool FalsificationDomain::contains(std::span<const double> theta_norm) const {
  for (const auto& a : anchors_) {
    if (a.theta_norm.size() != theta_norm.size())
      throw std::invalid_argument("FalsificationDomain: dimension mismatch");
    bool inside = true;
    for (std::size_t k = 0; k < theta_norm.size() && inside; ++k)
      inside = mono_ > 0 ? theta_norm[k] <= a.theta_norm[k]
                         : theta_norm[k] >= a.theta_norm[k];
    if (inside) return true;
  }
  return false;
}

bool FalsificationDomain::contains_strict(
    std::span<const double> theta_norm) const {
  for (const auto& a : anchors_) {
    if (a.theta_norm.size() != theta_norm.size())
      throw std::invalid_argument("FalsificationDomain: dimension mismatch");
    bool inside = true;
    for (std::size_t k = 0; k < theta_norm.size() && inside; ++k)
      inside = mono_ > 0 ? theta_norm[k] < a.theta_norm[k]
                         : theta_norm[k] > a.theta_norm[k];
    if (inside) return true;
  }
  return false;
}

void FalsificationDomain::insert(AnchorRecord anchor) {
  if (!(anchor.witness.robustness <= 0.0))
    throw std::invalid_argument(
        "FalsificationDomain::insert: witness robustness must be <= 0");
  if (anchor.theta_norm.empty())
    throw std::invalid_argument(
        "FalsificationDomain::insert: empty anchor");
  if (!anchors_.empty() &&
      anchors_.front().theta_norm.size() != anchor.theta_norm.size())
    throw std::invalid_argument(
        "FalsificationDomain::insert: dimension mismatch");
  auto covered_by = [this](const std::vector<double>& a,
                           const std::vector<double>& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
      if (mono_ > 0 ? a[k] > b[k] : a[k] < b[k]) return false;
    return true;
  };
  for (const auto& e : anchors_)
    if (covered_by(anchor.theta_norm, e.theta_norm)) return;
  std::erase_if(anchors_, [&](const AnchorRecord& e) {
    return covered_by(e.theta_norm, anchor.theta_norm);
  });
  anchors_.push_back(std::move(anchor));
}

double FalsificationDomain::volume(std::size_t samples,
                                   std::uint64_t seed) const {
  if (anchors_.empty() || samples == 0) return 0.0;
  const std::size_t dim = anchors_.front().theta_norm.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> point(dim);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& v : point) v = unit(rng);
    if (contains(point)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

int resolve_monotonicity(const MiningProblem& problem) {
  if (problem.assume_monotone != 0) {
    if (problem.assume_monotone != 1 && problem.assume_monotone != -1)
      throw std::invalid_argument(
          "mining: assume_monotone must be -1, 0, or +1");
    return problem.assume_monotone;
  }
  int overall = monotonicity(problem.formula, problem.params).overall;
  if (overall == 0)
    throw std::invalid_argument(
        "mining: specification is not uniformly monotone in its "
        "parameters; pass an explicit direction to proceed");
  return overall;
}

MineResult mine(const MiningProblem& problem, const Priority& priority,
                const OptimizerConfig& config, int iteration, SimLog* log) {
  validate_problem(problem);
  const int mono = resolve_monotonicity(problem);
  const Direction direction =
      mono > 0 ? Direction::Maximize : Direction::Minimize;
  const std::size_t nx = problem.search.x0_box.dim();
  const std::size_t nl = problem.search.inputs.dim();
  const std::size_t eta = problem.params.dim();
  const double gamma_mag = priority.penalty_magnitude(eta);
  const Box domain = joint_box(problem.search, eta, 0.0, 1.0);

  BestTracker tracker;
  tracker.direction = direction;
  CostOracle oracle = [&](std::span<const double> point) {
    auto x0 = point.subspan(0, nx);
    auto lambda = point.subspan(nx, nl);
    auto unit = point.subspan(nx + nl, eta);
    std::vector<double> theta_raw = denormalize(problem.params, unit);
    TimedStateSequence trace;
    double rob = simulate_sample(problem, x0, lambda, theta_raw, trace);
    log_sample(log, iteration, x0, lambda, theta_raw, rob);
    double f = priority(unit);
    double cost = mono > 0 ? cost_max(f, gamma_mag, rob)
                           : cost_min(f, gamma_mag, rob);
    if (tracker.improves(cost))
      record_best(tracker, cost, x0, lambda, std::move(theta_raw),
                  {unit.begin(), unit.end()}, rob, std::move(trace),
                  config.seed, iteration);
    return cost;
  };

  optimize(domain, oracle, direction, config);
  return std::move(tracker.best);
}

RayResult mine_ray(const MiningProblem& problem,
                   std::span<const double> position,
                   std::span<const double> bias,
                   const OptimizerConfig& config,
                   const FalsificationDomain* known, int iteration,
                   SimLog* log) {
  validate_problem(problem);
  const int mono = resolve_monotonicity(problem);
  const std::size_t nx = problem.search.x0_box.dim();
  const std::size_t nl = problem.search.inputs.dim();
  const std::size_t eta = problem.params.dim();
  if (position.size() != eta || bias.size() != eta)
    throw std::invalid_argument("mine_ray: position/bias dimension mismatch");
  for (double p : position)
    if (!(p >= 0.0) || !(p <= 1.0))
      throw std::invalid_argument(
          "mine_ray: position must lie in the unit box");
  double c_max = kInf;
  for (std::size_t k = 0; k < eta; ++k) {
    if (!(bias[k] >= 0.0))
      throw std::invalid_argument("mine_ray: bias must be nonnegative");
    if (bias[k] > 0.0) {
      double room = mono > 0 ? 1.0 - position[k] : position[k];
      c_max = std::min(c_max, room / bias[k]);
    }
  }
  if (c_max == kInf)
    throw std::invalid_argument("mine_ray: bias must be nonzero");
  c_max = std::max(c_max, 0.0);

  auto theta_at = [&](double c) {
    std::vector<double> unit(eta);
    for (std::size_t k = 0; k < eta; ++k)
      unit[k] = std::clamp(position[k] + mono * c * bias[k], 0.0, 1.0);
    return unit;
  };

  const Box domain = joint_box(problem.search, 1, 0.0, c_max);
  BestTracker tracker;
  tracker.direction = Direction::Maximize;
  double best_c = 0.0;

  CostOracle oracle = [&](std::span<const double> point) {
    auto x0 = point.subspan(0, nx);
    auto lambda = point.subspan(nx, nl);
    double c = point.back();
    std::vector<double> unit = theta_at(c);
    std::vector<double> theta_raw = denormalize(problem.params, unit);
    TimedStateSequence trace;
    double rob = simulate_sample(problem, x0, lambda, theta_raw, trace);
    log_sample(log, iteration, x0, lambda, theta_raw, rob);
    double cost = ray_cost(c, c_max, eta, rob);
    if (tracker.improves(cost)) {
      best_c = c;
      record_best(tracker, cost, x0, lambda, std::move(theta_raw),
                  std::move(unit), rob, std::move(trace), config.seed,
                  iteration);
    }
    return cost;
  };

  ProposalFilter filter;
  if (known && !known->empty())
    filter = [&](std::span<const double> point) {
      return known->contains_strict(theta_at(point.back()));
    };

  optimize(domain, oracle, Direction::Maximize, config, filter);
  return RayResult{best_c, std::move(tracker.best)};
}

std::vector<std::vector<double>> generate_markers(
    std::span<const double> theta_star, std::span<const double> position) {
  if (theta_star.size() != position.size())
    throw std::invalid_argument("generate_markers: dimension mismatch");
  const std::size_t eta = theta_star.size();
  if (eta >= 24)
    throw std::invalid_argument(
        "generate_markers: mixture enumeration needs fewer than 24 "
        "parameters");
  std::size_t differing = 0;
  for (std::size_t k = 0; k < eta; ++k)
    if (std::fabs(theta_star[k] - position[k]) > kMarkerTol) ++differing;
  if (differing < 2) return {};

  std::vector<std::vector<double>> out;
  std::vector<double> mix(eta);
  for (std::uint32_t mask = 1; mask + 1 < (1u << eta); ++mask) {
    for (std::size_t k = 0; k < eta; ++k)
      mix[k] = ((mask >> k) & 1u) != 0 ? theta_star[k] : position[k];
    if (near(mix, theta_star) || near(mix, position)) continue;
    bool dup = false;
    for (const auto& m : out)
      if (near(m, mix)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(mix);
  }
  return out;
}

MiningOutcome rgda(const MiningProblem& problem, const RgdaOptions& options,
                   std::uint64_t seed, SimLog* log) {
  validate_problem(problem);
  const int mono = resolve_monotonicity(problem);
  const std::size_t eta = problem.params.dim();
  MiningOutcome out{FalsificationDomain(mono), {}, 0, 0};
  if (options.iterations == 0) return out;

  struct Slot {
    MineResult result;
    SimLog sims;
  };
  std::vector<Slot> slots(options.iterations);
  parallel_for(options.iterations, options.jobs, [&](std::size_t i) {
    const std::uint64_t stream = derive_seed(seed, i);
    std::mt19937_64 rng(derive_seed(stream, 0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Priority priority{Priority::Kind::WeightedSum,
                      std::vector<double>(eta), 0};
    for (auto& w : priority.weights) w = unit(rng);
    OptimizerConfig cfg = options.optimizer;
    cfg.seed = derive_seed(stream, 1);
    slots[i].result = mine(problem, priority, cfg, static_cast<int>(i),
                           log ? &slots[i].sims : nullptr);
  });

  for (auto& slot : slots) {
    if (log)
      log->insert(log->end(), std::make_move_iterator(slot.sims.begin()),
                  std::make_move_iterator(slot.sims.end()));
    ++out.positions;
    MineResult& r = slot.result;
    if (!r.falsified) continue;
    AnchorRecord anchor{r.theta_norm, r.theta_raw, r.witness};
    out.found.push_back(anchor);
    out.domain.insert(std::move(anchor));
  }
  out.waves = 1;
  return out;
}

MiningOutcome sda(const MiningProblem& problem, const SdaOptions& options,
                  std::uint64_t seed, SimLog* log) {
  validate_problem(problem);
  const int mono = resolve_monotonicity(problem);
  const std::size_t eta = problem.params.dim();
  if (options.bias.size() != eta)
    throw std::invalid_argument("sda: bias dimension mismatch");
  bool moving = false;
  for (double b : options.bias) {
    if (!(b >= 0.0))
      throw std::invalid_argument("sda: bias must be nonnegative");
    if (b > 0.0) moving = true;
  }
  if (!moving) throw std::invalid_argument("sda: bias must be nonzero");

  MiningOutcome out{FalsificationDomain(mono), {}, 0, 0};
  std::vector<std::vector<double>> pending{
      std::vector<double>(eta, mono > 0 ? 0.0 : 1.0)};

  while (!pending.empty()) {
    if (options.max_positions > 0 && out.positions >= options.max_positions)
      break;
    ++out.waves;
    // Positions in one wave see the domain as of the wave start, so the
    // rejection filter cannot depend on scheduling order.
    const FalsificationDomain snapshot = out.domain;
    struct Slot {
      RayResult ray;
      SimLog sims;
    };
    std::vector<Slot> slots(pending.size());
    const std::size_t base = out.positions;
    parallel_for(pending.size(), options.jobs, [&](std::size_t j) {
      OptimizerConfig cfg = options.optimizer;
      cfg.seed = derive_seed(seed, base + j);
      slots[j].ray =
          mine_ray(problem, pending[j], options.bias, cfg,
                   snapshot.empty() ? nullptr : &snapshot,
                   static_cast<int>(base + j), log ? &slots[j].sims : nullptr);
    });

    std::vector<std::vector<double>> next;
    for (std::size_t j = 0; j < slots.size(); ++j) {
      if (log)
        log->insert(log->end(),
                    std::make_move_iterator(slots[j].sims.begin()),
                    std::make_move_iterator(slots[j].sims.end()));
      ++out.positions;
      MineResult& r = slots[j].ray.found;
      if (!r.falsified) continue;
      AnchorRecord anchor{r.theta_norm, r.theta_raw, r.witness};
      out.found.push_back(anchor);
      out.domain.insert(std::move(anchor));
      for (auto& m : generate_markers(r.theta_norm, pending[j])) {
        bool dup = false;
        for (const auto& q : next)
          if (near(q, m)) {
            dup = true;
            break;
          }
        if (!dup) next.push_back(std::move(m));
      }
    }
    if (next.empty()) break;
    if (max_pairwise_distance(next) < options.epsilon) break;
    pending = std::move(next);
  }
  return out;
}

std::vector<double> replay_witness_robustness(
    const MiningProblem& problem, const FalsificationDomain& domain) {
  std::vector<double> out;
  out.reserve(domain.anchors().size());
  for (const auto& a : domain.anchors()) {
    TimedStateSequence trace;
    out.push_back(simulate_sample(problem, a.witness.x0, a.witness.lambda,
                                  a.theta_raw, trace));
  }
  return out;
}

}  // namespace tlmine
