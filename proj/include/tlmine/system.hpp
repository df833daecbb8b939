#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tlmine/trace.hpp"

namespace tlmine {

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return lower.size(); }
  bool contains(std::span<const double> x) const;
  void validate() const;
};

enum class Interp : unsigned char { PiecewiseConstant, PiecewiseLinear };

// One exogenous input channel shaped by finitely many control values: the
// signal is defined by its values at the control times and the chosen
// interpolation, held constant beyond the last control time.
struct InputChannel {
  std::string name;
  std::vector<double> times;
  std::vector<double> lower;
  std::vector<double> upper;
  Interp interp = Interp::PiecewiseConstant;
};

struct InputParameterization {
  std::vector<InputChannel> channels;

  std::size_t dim() const;
  Box bounds() const;
  void validate() const;
};

// Value of every input channel at time t for the stacked control vector
// lambda (channel blocks concatenated in declaration order).
std::vector<double> interpolate_input(const InputParameterization& inputs,
                                      std::span<const double> lambda,
                                      double t);

// Where falsification searches: initial conditions plus input shapes.
// Either part may be empty (fixed initial state, autonomous system).
struct SearchSpace {
  Box x0_box;
  InputParameterization inputs;

  std::size_t dim() const { return x0_box.dim() + inputs.dim(); }
};

// Mode-indexed vector field: writes dx/dt for state x at time t.
using Dynamics = std::function<void(
    int mode, double t, std::span<const double> x, std::span<double> dxdt)>;

// Discrete transition taken as soon as the state enters the guard set.
struct GuardTransition {
  int from = 0;
  int to = 0;
  std::function<bool(std::span<const double>)> inside;
};

struct RkResult {
  TimedStateSequence trace;
  std::vector<int> modes;  // mode in effect at each sample
};

// Classical fixed-step fourth-order Runge-Kutta over [t0, t0 + horizon]
// sampling every step, floor(horizon/step)+1 samples in total. Guards are
// checked after each step and switch the mode for the next one. Throws
// std::runtime_error with the blow-up time if the state leaves the finite
// range.
RkResult integrate_rk4(const Dynamics& dynamics, std::span<const double> x0,
                       int mode0, double t0, double horizon, double step,
                       const std::vector<GuardTransition>& guards,
                       std::vector<std::string> channels);

// A simulatable plant: maps an initial state from x0_box and a control
// vector for `inputs` to a finite timed trace over `channels`.
struct SystemModel {
  std::string name;
  std::vector<std::string> channels;
  SearchSpace space;
  double horizon = 0.0;
  double step = 0.0;
  std::function<TimedStateSequence(std::span<const double> x0,
                                   std::span<const double> lambda)>
      simulate;
};

// Two-mode planar system: a nonlinear swirl with a slow time ramp that
// hands over to an unstable linear mode once the state crosses the window
// [0.85,0.95]^2; there is no transition back. Initial states range over
// [-1,1]^2; horizon 5, step 0.01; outputs x1, x2.
SystemModel make_hs_system();
Dynamics hs_dynamics();
std::vector<GuardTransition> hs_guards();

// Deterministic ramp y(t) = t on [0,10] with step 0.05; output y. No
// initial-condition or input freedom; useful as an analytic fixture.
SystemModel make_ramp_system();

// Closed-form two-state driveline stand-in: speed follows a first-order
// lag toward a throttle-proportional setpoint and engine speed follows a
// faster lag toward a setpoint tied to speed through a four-level gear
// map. Throttle is piecewise constant over [0,100] with control times
// 0,5,...,25; horizon 60, step 0.05; outputs v (mph-like) and omega
// (rpm-like). Not calibrated against any external model; intended for
// shape-level checks only.
SystemModel make_surrogate_at_system();

// Replays pre-recorded traces: a manifest JSON lists entries with grid
// coordinates {"x0": [...], "lambda": [...], "file": "trace.csv"} plus
// "x0_bounds" / "lambda_bounds" arrays of [lo,hi] pairs describing the
// searchable box. simulate() returns the entry nearest in Euclidean
// distance on the stacked (x0, lambda) vector. All traces load eagerly.
SystemModel make_replay_system(const std::string& manifest_path);

}  // namespace tlmine
