#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tlmine/parser.hpp"
#include "tlmine/robustness.hpp"
#include "tlmine/system.hpp"
#include "tlmine/trace.hpp"

using namespace tlmine;

TEST_CASE("input interpolation") {
  InputParameterization inputs;
  InputChannel u;
  u.name = "u";
  u.times = {0.0, 5.0};
  u.lower = {0.0, 0.0};
  u.upper = {100.0, 100.0};
  inputs.channels = {u};
  std::vector<double> lambda{10.0, 90.0};

  CHECK(interpolate_input(inputs, lambda, 0.0)[0] == 10.0);
  CHECK(interpolate_input(inputs, lambda, 4.9)[0] == 10.0);
  CHECK(interpolate_input(inputs, lambda, 5.0)[0] == 90.0);
  CHECK(interpolate_input(inputs, lambda, 99.0)[0] == 90.0);

  inputs.channels[0].interp = Interp::PiecewiseLinear;
  CHECK(interpolate_input(inputs, lambda, 2.5)[0] == doctest::Approx(50.0));
  CHECK(interpolate_input(inputs, lambda, -1.0)[0] == 10.0);

  std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(interpolate_input(inputs, wrong, 0.0),
                  std::invalid_argument);
}

TEST_CASE("input parameterization bounds and validation") {
  InputChannel a;
  a.name = "a";
  a.times = {0.0, 1.0};
  a.lower = {0.0, -1.0};
  a.upper = {1.0, 2.0};
  InputChannel b;
  b.name = "b";
  b.times = {0.0};
  b.lower = {5.0};
  b.upper = {6.0};
  InputParameterization inputs;
  inputs.channels = {a, b};
  CHECK(inputs.dim() == 3);
  Box bounds = inputs.bounds();
  CHECK(bounds.lower == std::vector<double>{0.0, -1.0, 5.0});
  CHECK(bounds.upper == std::vector<double>{1.0, 2.0, 6.0});
  CHECK_NOTHROW(inputs.validate());
  inputs.channels[0].times = {1.0, 1.0};
  CHECK_THROWS_AS(inputs.validate(), std::invalid_argument);
}

TEST_CASE("rk4 on a zero field keeps the state and sample count") {
  Dynamics zero = [](int, double, std::span<const double>,
                     std::span<double> dxdt) { dxdt[0] = 0.0; };
  std::vector<double> x0{3.0};
  RkResult r = integrate_rk4(zero, x0, 0, 0.0, 1.0, 0.1, {}, {"x"});
  REQUIRE(r.trace.size() == 11);
  CHECK(r.trace.times.front() == 0.0);
  CHECK(r.trace.times.back() == doctest::Approx(1.0));
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    CHECK(r.trace.value(i, 0) == 3.0);
}

TEST_CASE("rk4 integrates exponential growth accurately") {
  Dynamics exp_field = [](int, double, std::span<const double> x,
                          std::span<double> dxdt) { dxdt[0] = x[0]; };
  std::vector<double> x0{1.0};
  RkResult r = integrate_rk4(exp_field, x0, 0, 0.0, 1.0, 0.001, {}, {"x"});
  CHECK(r.trace.value(r.trace.size() - 1, 0) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("rk4 reports blow-up") {
  Dynamics quad = [](int, double, std::span<const double> x,
                     std::span<double> dxdt) { dxdt[0] = x[0] * x[0]; };
  std::vector<double> x0{10.0};
  CHECK_THROWS_AS(integrate_rk4(quad, x0, 0, 0.0, 5.0, 0.05, {}, {"x"}),
                  std::runtime_error);
}

TEST_CASE("rk4 guard switches the mode for subsequent steps") {
  Dynamics dyn = [](int mode, double, std::span<const double>,
                    std::span<double> dxdt) {
    dxdt[0] = mode == 0 ? 1.0 : -1.0;
  };
  std::vector<GuardTransition> guards{
      {0, 1, [](std::span<const double> x) { return x[0] >= 0.5; }}};
  std::vector<double> x0{0.0};
  RkResult r = integrate_rk4(dyn, x0, 0, 0.0, 1.0, 0.1, guards, {"x"});
  CHECK(r.modes.front() == 0);
  CHECK(r.modes.back() == 1);
  for (std::size_t i = 1; i < r.modes.size(); ++i)
    CHECK(r.modes[i] >= r.modes[i - 1]);
  CHECK(r.trace.value(r.trace.size() - 1, 0) <
        r.trace.value(5, 0) + 1e-12);
}

TEST_CASE("hybrid benchmark honors its initial box") {
  SystemModel hs = make_hs_system();
  CHECK(hs.channels == std::vector<std::string>{"x1", "x2"});
  CHECK(hs.space.x0_box.dim() == 2);
  CHECK(hs.space.inputs.dim() == 0);
  std::vector<double> outside{1.5, 0.0};
  CHECK_THROWS_AS(hs.simulate(outside, {}), std::invalid_argument);
  std::vector<double> lambda{1.0};
  std::vector<double> inside{0.0, 0.0};
  CHECK_THROWS_AS(hs.simulate(inside, lambda), std::invalid_argument);
}

TEST_CASE("hybrid benchmark matches the linear mode closed form") {
  SystemModel hs = make_hs_system();
  std::vector<double> x0{0.9, 0.9};
  TimedStateSequence tss = hs.simulate(x0, {});
  REQUIRE(tss.size() == 501);
  std::size_t k100 = 100;
  CHECK(tss.times[k100] == doctest::Approx(1.0));
  CHECK(tss.value(k100, 0) ==
        doctest::Approx(0.9 * std::exp(1.0)).epsilon(1e-7));
  CHECK(tss.value(k100, 1) ==
        doctest::Approx(0.9 * std::exp(1.0) * (1.0 - 1.0)).epsilon(1e-6));
}

TEST_CASE("hybrid benchmark never leaves the unstable mode") {
  std::vector<double> x0{0.2, -0.4};
  RkResult r = integrate_rk4(hs_dynamics(), x0, 0, 0.0, 5.0, 0.01,
                             hs_guards(), {"x1", "x2"});
  for (std::size_t i = 1; i < r.modes.size(); ++i)
    CHECK(r.modes[i] >= r.modes[i - 1]);
}

TEST_CASE("ramp closed forms") {
  SystemModel ramp = make_ramp_system();
  TimedStateSequence tss = ramp.simulate({}, {});
  REQUIRE(tss.size() == 201);
  CHECK(tss.value(0, 0) == 0.0);
  CHECK(tss.value(200, 0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(robustness(parse_formula("[] (y <= 3)"), tss) ==
        doctest::Approx(3.0 - 10.0).epsilon(1e-12));
  CHECK(robustness(parse_formula("[] (2*y <= 30)"), tss) ==
        doctest::Approx(15.0 - 10.0).epsilon(1e-12));
  std::vector<double> x0{1.0};
  CHECK_THROWS_AS(ramp.simulate(x0, {}), std::invalid_argument);
}

TEST_CASE("surrogate transmission stays at rest with zero throttle") {
  SystemModel at = make_surrogate_at_system();
  CHECK(at.space.x0_box.dim() == 0);
  REQUIRE(at.space.inputs.dim() == 6);
  std::vector<double> zero(6, 0.0);
  TimedStateSequence tss = at.simulate({}, zero);
  for (std::size_t i = 0; i < tss.size(); ++i)
    CHECK(tss.value(i, 0) == doctest::Approx(0.0).epsilon(1e-9));

  std::vector<double> full(6, 100.0);
  TimedStateSequence hard = at.simulate({}, full);
  CHECK(hard.value(hard.size() - 1, 0) > 100.0);
  CHECK(hard.value(hard.size() - 1, 1) > 3000.0);
}

TEST_CASE("simulation is bitwise deterministic") {
  SystemModel hs = make_hs_system();
  std::vector<double> x0{0.31, -0.77};
  TimedStateSequence a = hs.simulate(x0, {});
  TimedStateSequence b = hs.simulate(x0, {});
  CHECK(a.values == b.values);
  CHECK(a.times == b.times);
}

TEST_CASE("replay system returns the nearest recorded trace") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "tlmine_replay_test";
  fs::create_directories(dir);
  TimedStateSequence left;
  left.channels = {"y"};
  left.times = {0.0, 1.0};
  left.values = {0.0, 0.0};
  TimedStateSequence right = left;
  right.values = {5.0, 5.0};
  write_trace_csv((dir / "left.csv").string(), left);
  write_trace_csv((dir / "right.csv").string(), right);
  std::ofstream manifest(dir / "manifest.json");
  manifest << R"({"x0_bounds": [[0, 1]], "lambda_bounds": [],
                  "entries": [
                    {"x0": [0.0], "lambda": [], "file": "left.csv"},
                    {"x0": [1.0], "lambda": [], "file": "right.csv"}]})";
  manifest.close();

  SystemModel replay = make_replay_system((dir / "manifest.json").string());
  CHECK(replay.space.x0_box.dim() == 1);
  std::vector<double> near_left{0.2}, near_right{0.9};
  CHECK(replay.simulate(near_left, {}).value(0, 0) == 0.0);
  CHECK(replay.simulate(near_right, {}).value(0, 0) == 5.0);
  fs::remove_all(dir);
}
