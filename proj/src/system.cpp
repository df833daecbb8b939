#include "tlmine/system.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "text_util.hpp"

namespace tlmine {

bool Box::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t k = 0; k < dim(); ++k) {
    if (x[k] < lower[k] || x[k] > upper[k]) return false;
  }
  return true;
}

void Box::validate() const {
  if (lower.size() != upper.size()) {
    throw std::invalid_argument("box: bound lengths differ");
  }
  for (std::size_t k = 0; k < dim(); ++k) {
    if (!(lower[k] <= upper[k]) || !std::isfinite(lower[k]) ||
        !std::isfinite(upper[k])) {
      throw std::invalid_argument("box: bad bounds at coordinate " +
                                  std::to_string(k));
    }
  }
}

std::size_t InputParameterization::dim() const {
  std::size_t total = 0;
  for (const auto& ch : channels) total += ch.times.size();
  return total;
}

Box InputParameterization::bounds() const {
  Box b;
  for (const auto& ch : channels) {
    b.lower.insert(b.lower.end(), ch.lower.begin(), ch.lower.end());
    b.upper.insert(b.upper.end(), ch.upper.begin(), ch.upper.end());
  }
  return b;
}

void InputParameterization::validate() const {
  for (const auto& ch : channels) {
    if (ch.times.empty()) {
      throw std::invalid_argument("input '" + ch.name +
                                  "': needs at least one control time");
    }
    if (ch.lower.size() != ch.times.size() ||
        ch.upper.size() != ch.times.size()) {
      throw std::invalid_argument("input '" + ch.name +
                                  "': bounds must match control times");
    }
    for (std::size_t k = 0; k < ch.times.size(); ++k) {
      if (k > 0 && ch.times[k] <= ch.times[k - 1]) {
        throw std::invalid_argument("input '" + ch.name +
                                    "': control times must increase");
      }
      if (!(ch.lower[k] <= ch.upper[k])) {
        throw std::invalid_argument("input '" + ch.name +
                                    "': lower > upper at control point " +
                                    std::to_string(k));
      }
    }
  }
}

std::vector<double> interpolate_input(const InputParameterization& inputs,
                                      std::span<const double> lambda,
                                      double t) {
  if (lambda.size() != inputs.dim()) {
    throw std::invalid_argument(
        "interpolate_input: control vector has dimension " +
        std::to_string(lambda.size()) + ", expected " +
        std::to_string(inputs.dim()));
  }
  std::vector<double> out;
  out.reserve(inputs.channels.size());
  std::size_t offset = 0;
  for (const auto& ch : inputs.channels) {
    std::span<const double> vals = lambda.subspan(offset, ch.times.size());
    offset += ch.times.size();
    const auto& ts = ch.times;
    if (t <= ts.front()) {
      out.push_back(vals.front());
      continue;
    }
    if (t >= ts.back()) {
      out.push_back(vals.back());
      continue;
    }
    std::size_t k = 0;
    while (k + 1 < ts.size() && ts[k + 1] <= t) ++k;
    if (ch.interp == Interp::PiecewiseConstant) {
      out.push_back(vals[k]);
    } else {
      double w = (t - ts[k]) / (ts[k + 1] - ts[k]);
      out.push_back(vals[k] + w * (vals[k + 1] - vals[k]));
    }
  }
  return out;
}

RkResult integrate_rk4(const Dynamics& dynamics, std::span<const double> x0,
                       int mode0, double t0, double horizon, double step,
                       const std::vector<GuardTransition>& guards,
                       std::vector<std::string> channels) {
  if (step <= 0.0) throw std::invalid_argument("integrate_rk4: step <= 0");
  if (x0.size() != channels.size()) {
    throw std::invalid_argument("integrate_rk4: state/channel size mismatch");
  }
  const std::size_t d = x0.size();
  // Tolerate horizons that are intended as exact multiples of the step.
  const auto steps =
      static_cast<std::size_t>(std::floor(horizon / step + 1e-9));

  RkResult res;
  res.trace.channels = std::move(channels);
  res.trace.times.reserve(steps + 1);
  res.trace.values.reserve((steps + 1) * d);
  res.modes.reserve(steps + 1);

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
  int mode = mode0;

  auto check_finite = [&x](double t) {
    for (double v : x) {
      if (!std::isfinite(v)) {
        throw std::runtime_error(
            "integrate_rk4: non-finite state at t=" + format_double(t));
      }
    }
  };
  auto record = [&](std::size_t i) {
    res.trace.times.push_back(t0 + static_cast<double>(i) * step);
    res.trace.values.insert(res.trace.values.end(), x.begin(), x.end());
    res.modes.push_back(mode);
  };

  check_finite(t0);
  record(0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = t0 + static_cast<double>(i) * step;
    dynamics(mode, t, x, k1);
    for (std::size_t j = 0; j < d; ++j) tmp[j] = x[j] + 0.5 * step * k1[j];
    dynamics(mode, t + 0.5 * step, tmp, k2);
    for (std::size_t j = 0; j < d; ++j) tmp[j] = x[j] + 0.5 * step * k2[j];
    dynamics(mode, t + 0.5 * step, tmp, k3);
    for (std::size_t j = 0; j < d; ++j) tmp[j] = x[j] + step * k3[j];
    dynamics(mode, t + step, tmp, k4);
    for (std::size_t j = 0; j < d; ++j) {
      x[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    check_finite(t + step);
    for (const auto& g : guards) {
      if (g.from == mode && g.inside(x)) {
        mode = g.to;
        break;
      }
    }
    record(i + 1);
  }
  return res;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Dynamics hs_dynamics() {
  return [](int mode, double t, std::span<const double> x,
            std::span<double> dxdt) {
    if (mode == 0) {
      dxdt[0] = x[0] - x[1] + 0.1 * t;
      dxdt[1] = -x[0] * std::sin(kTwoPi * x[0]) +
                x[1] * std::cos(kTwoPi * x[1]) + 0.1 * t;
    } else {
      dxdt[0] = x[0];
      dxdt[1] = -x[0] + x[1];
    }
  };
}

std::vector<GuardTransition> hs_guards() {
  Box window{{0.85, 0.85}, {0.95, 0.95}};
  return {{0, 1, [window](std::span<const double> x) {
             return window.contains(x);
           }}};
}

SystemModel make_hs_system() {
  SystemModel m;
  m.name = "hs";
  m.channels = {"x1", "x2"};
  m.space.x0_box = {{-1.0, -1.0}, {1.0, 1.0}};
  m.horizon = 5.0;
  m.step = 0.01;
  Box x0_box = m.space.x0_box;
  double horizon = m.horizon;
  double step = m.step;
  m.simulate = [x0_box, horizon, step](std::span<const double> x0,
                                       std::span<const double> lambda) {
    if (!lambda.empty()) {
      throw std::invalid_argument("hs: no inputs expected");
    }
    if (!x0_box.contains(x0)) {
      throw std::invalid_argument("hs: initial state outside [-1,1]^2");
    }
    Box window{{0.85, 0.85}, {0.95, 0.95}};
    int mode0 = window.contains(x0) ? 1 : 0;
    return integrate_rk4(hs_dynamics(), x0, mode0, 0.0, horizon, step,
                         hs_guards(), {"x1", "x2"})
        .trace;
  };
  return m;
}

SystemModel make_ramp_system() {
  SystemModel m;
  m.name = "ramp";
  m.channels = {"y"};
  m.horizon = 10.0;
  m.step = 0.05;
  double horizon = m.horizon;
  double step = m.step;
  m.simulate = [horizon, step](std::span<const double> x0,
                               std::span<const double> lambda) {
    if (!x0.empty() || !lambda.empty()) {
      throw std::invalid_argument("ramp: autonomous, no x0 or inputs");
    }
    TimedStateSequence tss;
    tss.channels = {"y"};
    auto steps = static_cast<std::size_t>(std::floor(horizon / step + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) {
      double t = static_cast<double>(i) * step;
      tss.times.push_back(t);
      tss.values.push_back(t);
    }
    return tss;
  };
  return m;
}

namespace {

// Four-level gear schedule over speed, with downstream ratio and lag gain.
struct GearPoint {
  double ratio;
  double gain;
};

GearPoint gear_at(double v) {
  if (v < 30.0) return {4.0, 1.2};
  if (v < 60.0) return {2.5, 1.0};
  if (v < 95.0) return {1.5, 0.85};
  return {1.0, 0.7};
}

}  // namespace

SystemModel make_surrogate_at_system() {
  SystemModel m;
  m.name = "surrogate_at";
  m.channels = {"v", "omega"};
  InputChannel throttle;
  throttle.name = "throttle";
  throttle.times = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
  throttle.lower.assign(6, 0.0);
  throttle.upper.assign(6, 100.0);
  throttle.interp = Interp::PiecewiseConstant;
  m.space.inputs.channels = {throttle};
  m.horizon = 60.0;
  m.step = 0.05;

  InputParameterization inputs = m.space.inputs;
  double horizon = m.horizon;
  double step = m.step;
  m.simulate = [inputs, horizon, step](std::span<const double> x0,
                                       std::span<const double> lambda) {
    if (!x0.empty()) {
      throw std::invalid_argument("surrogate_at: starts from rest, no x0");
    }
    std::vector<double> control(lambda.begin(), lambda.end());
    Dynamics dyn = [inputs, control](int, double t, std::span<const double> x,
                                     std::span<double> dxdt) {
      double u = interpolate_input(inputs, control, t)[0];
      double v = x[0];
      double omega = x[1];
      GearPoint g = gear_at(v);
      dxdt[0] = g.gain * (1.7 * u - v) / 9.0;
      double omega_ss = 300.0 + 28.0 * g.ratio * v + 3.0 * u;
      dxdt[1] = (omega_ss - omega) / 1.5;
    };
    std::vector<double> start{0.0, 0.0};
    return integrate_rk4(dyn, start, 0, 0.0, horizon, step, {},
                         {"v", "omega"})
        .trace;
  };
  return m;
}

namespace {

struct ReplayEntry {
  std::vector<double> key;  // x0 then lambda
  TimedStateSequence trace;
};

std::vector<double> json_vector(const nlohmann::json& arr) {
  std::vector<double> out;
  for (const auto& v : arr) out.push_back(v.get<double>());
  return out;
}

Box json_box(const nlohmann::json& arr) {
  Box b;
  for (const auto& pair : arr) {
    b.lower.push_back(pair.at(0).get<double>());
    b.upper.push_back(pair.at(1).get<double>());
  }
  b.validate();
  return b;
}

}  // namespace

SystemModel make_replay_system(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw std::runtime_error("replay: cannot open manifest " + manifest_path);
  }
  nlohmann::json doc = nlohmann::json::parse(in);
  auto dir = std::filesystem::path(manifest_path).parent_path();

  auto entries = std::make_shared<std::vector<ReplayEntry>>();
  for (const auto& e : doc.at("entries")) {
    ReplayEntry entry;
    auto x0 = json_vector(e.value("x0", nlohmann::json::array()));
    auto lambda = json_vector(e.value("lambda", nlohmann::json::array()));
    entry.key = x0;
    entry.key.insert(entry.key.end(), lambda.begin(), lambda.end());
    entry.trace = read_trace_csv((dir / e.at("file").get<std::string>()));
    entries->push_back(std::move(entry));
  }
  if (entries->empty()) throw std::runtime_error("replay: no entries");

  SystemModel m;
  m.name = "replay";
  m.channels = entries->front().trace.channels;
  if (doc.contains("x0_bounds")) m.space.x0_box = json_box(doc["x0_bounds"]);
  if (doc.contains("lambda_bounds")) {
    Box lb = json_box(doc["lambda_bounds"]);
    InputChannel ch;
    ch.name = "lambda";
    for (std::size_t k = 0; k < lb.dim(); ++k) {
      ch.times.push_back(static_cast<double>(k));
    }
    ch.lower = lb.lower;
    ch.upper = lb.upper;
    m.space.inputs.channels = {ch};
  }
  const std::size_t key_dim = m.space.x0_box.dim() + m.space.inputs.dim();
  for (const auto& e : *entries) {
    if (e.key.size() != key_dim) {
      throw std::runtime_error("replay: entry key dimension mismatch");
    }
  }
  auto last = doc.value("horizon", entries->front().trace.times.back());
  m.horizon = last;
  m.step = entries->front().trace.times.size() > 1
               ? entries->front().trace.times[1] - entries->front().trace.times[0]
               : 0.0;
  m.simulate = [entries](std::span<const double> x0,
                         std::span<const double> lambda) {
    std::vector<double> key(x0.begin(), x0.end());
    key.insert(key.end(), lambda.begin(), lambda.end());
    const ReplayEntry* best = nullptr;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (const auto& e : *entries) {
      if (e.key.size() != key.size()) {
        throw std::invalid_argument("replay: query dimension mismatch");
      }
      double d2 = 0.0;
      for (std::size_t k = 0; k < key.size(); ++k) {
        double d = key[k] - e.key[k];
        d2 += d * d;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = &e;
      }
    }
    return best->trace;
  };
  return m;
}

}  // namespace tlmine
