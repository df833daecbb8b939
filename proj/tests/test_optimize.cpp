#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tlmine/optimize.hpp"

using namespace tlmine;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Priority norm_priority() { return {Priority::Kind::Norm, {}, 0}; }

Box unit_box(std::size_t dim) {
  Box b;
  b.lower.assign(dim, 0.0);
  b.upper.assign(dim, 1.0);
  return b;
}
}  // namespace

TEST_CASE("priority scalarizations") {
  std::vector<double> theta{0.3, 0.9};
  Priority norm = norm_priority();
  CHECK(norm(theta) == doctest::Approx(std::hypot(0.3, 0.9)).epsilon(1e-12));

  Priority wsum{Priority::Kind::WeightedSum, {1.0, 0.0}, 0};
  CHECK(wsum(theta) == 0.3);
  Priority bad{Priority::Kind::WeightedSum, {1.0}, 0};
  CHECK_THROWS_AS(bad(theta), std::invalid_argument);

  Priority mx{Priority::Kind::Max, {}, 0};
  Priority mn{Priority::Kind::Min, {}, 0};
  CHECK(mx(theta) == 0.9);
  CHECK(mn(theta) == 0.3);

  Priority single{Priority::Kind::Single, {}, 1};
  CHECK(single(theta) == 0.9);
  Priority oob{Priority::Kind::Single, {}, 5};
  CHECK_THROWS_AS(oob(theta), std::invalid_argument);
}

TEST_CASE("penalty magnitudes") {
  CHECK(norm_priority().penalty_magnitude(2) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  Priority single{Priority::Kind::Single, {}, 0};
  CHECK(single.penalty_magnitude(3) == doctest::Approx(2.0).epsilon(1e-12));
  Priority wsum{Priority::Kind::WeightedSum, {0.2, 0.01, 0.01}, 0};
  CHECK(wsum.penalty_magnitude(3) == doctest::Approx(1.22).epsilon(1e-12));
  Priority mx{Priority::Kind::Max, {}, 0};
  CHECK(mx.penalty_magnitude(4) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("penalized cost for minimization") {
  Priority f = norm_priority();
  std::vector<double> theta{0.5, 0.5};
  double f_theta = f(theta);
  double gamma = f.penalty_magnitude(2);
  CHECK(cost_min(f_theta, gamma, -0.5) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(cost_min(f_theta, gamma, 0.5) ==
        doctest::Approx(std::sqrt(0.5) + std::sqrt(2.0) + 0.5).epsilon(1e-12));
  CHECK(cost_min(f_theta, gamma, 0.0) ==
        doctest::Approx(std::sqrt(0.5) + std::sqrt(2.0)).epsilon(1e-12));
  CHECK(cost_min(f_theta, gamma, kInf) == kInf);
}

TEST_CASE("penalized cost for maximization") {
  Priority f = norm_priority();
  std::vector<double> low{0.5, 0.5}, high{0.9, 0.9};
  double gamma = f.penalty_magnitude(2);
  double falsified = cost_max(f(low), gamma, -0.1);
  double satisfied = cost_max(f(high), gamma, 0.2);
  CHECK(falsified == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(satisfied ==
        doctest::Approx(std::sqrt(1.62) - std::sqrt(2.0) - 0.2).epsilon(1e-12));
  CHECK(satisfied < falsified);
  CHECK(cost_max(f(high), gamma, kInf) == -kInf);
}

TEST_CASE("falsifying samples always beat non-falsifying ones") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> rob_neg(-3.0, 0.0);
  std::uniform_real_distribution<double> rob_pos(0.0, 3.0);
  std::uniform_int_distribution<std::size_t> dim_d(1, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t dim = dim_d(rng);
    std::vector<Priority> kinds{
        norm_priority(),
        {Priority::Kind::Max, {}, 0},
        {Priority::Kind::Min, {}, 0},
        {Priority::Kind::Single, {}, dim - 1},
        {Priority::Kind::WeightedSum, std::vector<double>(dim, 0.5), 0}};
    for (const Priority& f : kinds) {
      std::vector<double> a(dim), b(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        a[k] = unit(rng);
        b[k] = unit(rng);
      }
      double gamma = f.penalty_magnitude(dim);
      double fals = rob_neg(rng);
      double sat = rob_pos(rng);
      CHECK(cost_min(f(a), gamma, fals) < cost_min(f(b), gamma, sat));
      CHECK(cost_max(f(a), gamma, fals) > cost_max(f(b), gamma, sat));
    }
  }
}

TEST_CASE("ray cost prefers any falsifying travel") {
  double c_max = 2.0;
  CHECK(ray_cost(0.7, c_max, 2, -0.3) == 0.7);
  double penalized = ray_cost(1.9, c_max, 2, 0.4);
  CHECK(penalized == doctest::Approx(1.9 - 3.0 - 0.4).epsilon(1e-12));
  CHECK(penalized < ray_cost(0.0, c_max, 2, -1e-9));
  CHECK(ray_cost(0.1, 5.0, 2, 0.0) ==
        doctest::Approx(0.1 - 6.0).epsilon(1e-12));
}

TEST_CASE("annealing finds a known optimum") {
  Box box = unit_box(5);
  std::vector<double> target{0.2, 0.8, 0.5, 0.1, 0.9};
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    OptimizerConfig cfg;
    cfg.budget = 2000;
    cfg.seed = seed;
    CostOracle oracle = [&target](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k)
        s += (x[k] - target[k]) * (x[k] - target[k]);
      return std::sqrt(s);
    };
    OptResult res = simulated_annealing(box, oracle, Direction::Minimize, cfg);
    CHECK(res.evals == 2000);
    if (res.best_cost <= 0.05) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("budget is spent exactly and the best sample is returned") {
  for (std::size_t budget : {std::size_t{1}, std::size_t{2}, std::size_t{3},
                             std::size_t{10}, std::size_t{37},
                             std::size_t{100}}) {
    for (int restarts : {0, 1, 4}) {
      std::size_t calls = 0;
      double best_seen = kInf;
      OptimizerConfig cfg;
      cfg.budget = budget;
      cfg.seed = 9;
      cfg.restarts = restarts;
      CostOracle oracle = [&](std::span<const double> x) {
        ++calls;
        double c = std::cos(7.0 * x[0]) + x[1];
        best_seen = std::min(best_seen, c);
        return c;
      };
      OptResult res =
          simulated_annealing(unit_box(2), oracle, Direction::Minimize, cfg);
      CHECK(calls == budget);
      CHECK(res.evals == budget);
      CHECK(res.best_cost == best_seen);
    }
  }
}

TEST_CASE("maximization keeps the largest sample") {
  OptimizerConfig cfg;
  cfg.budget = 50;
  cfg.seed = 4;
  double best_seen = -kInf;
  CostOracle oracle = [&](std::span<const double> x) {
    best_seen = std::max(best_seen, x[0]);
    return x[0];
  };
  OptResult res =
      simulated_annealing(unit_box(1), oracle, Direction::Maximize, cfg);
  CHECK(res.best_cost == best_seen);
}

TEST_CASE("same seed reproduces the same run") {
  OptimizerConfig cfg;
  cfg.budget = 300;
  cfg.seed = 77;
  CostOracle oracle = [](std::span<const double> x) {
    return std::sin(5.0 * x[0]) * std::cos(3.0 * x[1]) + x[0];
  };
  OptResult a = simulated_annealing(unit_box(2), oracle, Direction::Minimize, cfg);
  OptResult b = simulated_annealing(unit_box(2), oracle, Direction::Minimize, cfg);
  CHECK(a.best_cost == b.best_cost);
  CHECK(a.best_point == b.best_point);
  OptimizerConfig other = cfg;
  other.seed = 78;
  OptResult c =
      simulated_annealing(unit_box(2), oracle, Direction::Minimize, other);
  CHECK(c.best_point != a.best_point);
}

TEST_CASE("constant costs and infinities stay well-behaved") {
  OptimizerConfig cfg;
  cfg.budget = 40;
  cfg.seed = 1;
  CostOracle flat = [](std::span<const double>) { return 1.5; };
  OptResult res = simulated_annealing(unit_box(2), flat, Direction::Minimize, cfg);
  CHECK(res.best_cost == 1.5);
  CHECK(res.evals == 40);

  CostOracle wall = [](std::span<const double> x) {
    return x[0] < 0.5 ? kInf : x[0];
  };
  OptResult walled =
      simulated_annealing(unit_box(1), wall, Direction::Minimize, cfg);
  CHECK(walled.best_cost < kInf);
}

TEST_CASE("optimizer input validation") {
  OptimizerConfig cfg;
  cfg.budget = 0;
  CostOracle oracle = [](std::span<const double>) { return 0.0; };
  CHECK_THROWS_AS(simulated_annealing(unit_box(1), oracle,
                                      Direction::Minimize, cfg),
                  std::invalid_argument);
  cfg.budget = 10;
  Box bad;
  bad.lower = {1.0};
  bad.upper = {0.0};
  CHECK_THROWS_AS(simulated_annealing(bad, oracle, Direction::Minimize, cfg),
                  std::invalid_argument);
}

TEST_CASE("uniform baseline and dispatch") {
  OptimizerConfig cfg;
  cfg.budget = 200;
  cfg.seed = 5;
  std::size_t calls = 0;
  CostOracle oracle = [&calls](std::span<const double> x) {
    ++calls;
    return std::abs(x[0] - 0.25);
  };
  OptResult res = uniform_search(unit_box(1), oracle, Direction::Minimize, cfg);
  CHECK(calls == 200);
  CHECK(res.best_cost < 0.05);

  cfg.algorithm = Algorithm::Uniform;
  OptResult via = optimize(unit_box(1), oracle, Direction::Minimize, cfg);
  CHECK(via.best_cost == res.best_cost);
  CHECK(via.best_point == res.best_point);
}

TEST_CASE("proposal filter excludes points without spending budget") {
  OptimizerConfig cfg;
  cfg.budget = 120;
  cfg.seed = 13;
  std::size_t calls = 0;
  CostOracle oracle = [&calls](std::span<const double> x) {
    ++calls;
    return x[0];
  };
  ProposalFilter filter = [](std::span<const double> x) {
    return x[0] < 0.4;
  };
  OptResult res =
      simulated_annealing(unit_box(1), oracle, Direction::Minimize, cfg, filter);
  CHECK(calls == 120);
  CHECK(res.best_point[0] >= 0.4);
  CHECK(res.best_cost >= 0.4);
}

TEST_CASE("seed stream derivation separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
}
