#include "tlmine/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "text_util.hpp"
#include "tlmine/parser.hpp"

namespace tlmine {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kVolumeStream = 0x766f6cULL;

std::string iso_timestamp() {
  std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

// JSON has no infinities; non-finite values are stored as strings.
json json_real(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json json_vector(std::span<const double> values) {
  json arr = json::array();
  for (double v : values) arr.push_back(json_real(v));
  return arr;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out)
    throw std::runtime_error("write failed for '" + path.string() + "'");
}

struct OutDir {
  fs::path dir;
  bool enabled = false;
};

OutDir prepare_out(const RunConfig& config) {
  if (config.out.empty()) return {};
  fs::create_directories(config.out);
  return {fs::path(config.out), true};
}

json result_base(const RunConfig& config, const char* command) {
  json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["timestamp"] = iso_timestamp();
  j["system"] = config.system;
  j["formula"] = config.formula;
  j["seed"] = config.seed;
  if (config.params.dim() > 0) {
    j["param_names"] = config.params.names;
    j["theta_min"] = json_vector(config.params.lower);
    j["theta_max"] = json_vector(config.params.upper);
  }
  return j;
}

json witness_json(const Witness& w) {
  json j;
  j["x0"] = json_vector(w.x0);
  j["lambda"] = json_vector(w.lambda);
  j["seed"] = w.seed;
  j["iteration"] = w.iteration;
  return j;
}

json anchors_json(const std::vector<AnchorRecord>& anchors) {
  json arr = json::array();
  for (const auto& a : anchors) {
    json j;
    j["theta_raw"] = json_vector(a.theta_raw);
    j["theta_norm"] = json_vector(a.theta_norm);
    j["robustness"] = json_real(a.witness.robustness);
    j["witness"] = witness_json(a.witness);
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string anchors_csv(const ParamSpace& params, std::size_t nx,
                        std::size_t nl,
                        const std::vector<AnchorRecord>& anchors) {
  std::string out = "index";
  for (const auto& n : params.names) out += ",raw_" + n;
  for (const auto& n : params.names) out += ",norm_" + n;
  out += ",robustness,seed,iteration";
  for (std::size_t k = 0; k < nx; ++k) out += ",x0_" + std::to_string(k);
  for (std::size_t k = 0; k < nl; ++k) out += ",lambda_" + std::to_string(k);
  out += "\n";
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const auto& a = anchors[i];
    out += std::to_string(i);
    for (double v : a.theta_raw) out += "," + format_double(v);
    for (double v : a.theta_norm) out += "," + format_double(v);
    out += "," + format_double(a.witness.robustness);
    out += "," + std::to_string(a.witness.seed);
    out += "," + std::to_string(a.witness.iteration);
    for (double v : a.witness.x0) out += "," + format_double(v);
    for (double v : a.witness.lambda) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::string runlog_csv(const ParamSpace& params, std::size_t nx,
                       std::size_t nl, const SimLog& log) {
  std::string out = "iteration";
  for (std::size_t k = 0; k < nx; ++k) out += ",x0_" + std::to_string(k);
  for (std::size_t k = 0; k < nl; ++k) out += ",lambda_" + std::to_string(k);
  for (const auto& n : params.names) out += ",raw_" + n;
  out += ",robustness\n";
  for (const auto& r : log) {
    out += std::to_string(r.iteration);
    for (double v : r.x0) out += "," + format_double(v);
    for (double v : r.lambda) out += "," + format_double(v);
    for (double v : r.theta_raw) out += "," + format_double(v);
    out += "," + format_double(r.robustness);
    out += "\n";
  }
  return out;
}

std::vector<double> box_midpoint(const Box& box) {
  std::vector<double> mid(box.dim());
  for (std::size_t k = 0; k < mid.size(); ++k)
    mid[k] = 0.5 * (box.lower[k] + box.upper[k]);
  return mid;
}

void write_mining_outputs(const RunConfig& config,
                          const MiningProblem& problem, json result,
                          const std::vector<AnchorRecord>& anchors,
                          const SimLog& log) {
  OutDir out = prepare_out(config);
  if (!out.enabled) return;
  const std::size_t nx = problem.search.x0_box.dim();
  const std::size_t nl = problem.search.inputs.dim();
  write_file(out.dir / "result.json", result.dump(2) + "\n");
  write_file(out.dir / "anchors.csv",
             anchors_csv(config.params, nx, nl, anchors));
  write_file(out.dir / "runlog.csv", runlog_csv(config.params, nx, nl, log));
}

}  // namespace

int cmd_robustness(const RunConfig& config, const std::string& trace_path) {
  std::string path =
      !trace_path.empty() ? trace_path : config.robustness.trace;
  if (path.empty())
    throw std::invalid_argument("robustness needs a trace file");
  TimedStateSequence tss = read_trace_csv(path);
  Formula f = parse_formula(config.formula, config.params.names);
  if (!f.is_ground())
    throw std::invalid_argument(
        "robustness needs a ground formula; parameters are only mined");
  double rob = robustness(f, tss, 0, config.eval);
  std::cout << "robustness " << format_double(rob) << "\n";

  json series = json::array();
  if (config.robustness.series) {
    std::vector<double> values = robustness_series(f, tss, config.eval);
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::cout << i << "," << format_double(tss.times[i]) << ","
                << format_double(values[i]) << "\n";
      series.push_back(json_real(values[i]));
    }
  }

  OutDir out = prepare_out(config);
  if (out.enabled) {
    json j = result_base(config, "robustness");
    j["trace"] = path;
    j["robustness"] = json_real(rob);
    if (config.robustness.series) j["series"] = std::move(series);
    write_file(out.dir / "result.json", j.dump(2) + "\n");
  }
  return rob > 0.0 ? 0 : 1;
}

int cmd_mine(const RunConfig& config) {
  MiningProblem problem = make_problem(config);
  Priority priority = make_priority(config.priority, config.params.dim());
  OptimizerConfig opt = config.optimizer;
  opt.seed = config.seed;
  SimLog log;
  MineResult r = mine(problem, priority, opt, 0, &log);

  json j = result_base(config, "mine");
  j["monotonicity"] = resolve_monotonicity(problem);
  j["budget"] = opt.budget;
  j["simulations"] = log.size();
  j["falsified"] = r.falsified;
  j["robustness"] = json_real(r.gamma);
  j["theta_raw"] = json_vector(r.theta_raw);
  j["theta_norm"] = json_vector(r.theta_norm);
  j["witness"] = witness_json(r.witness);

  std::vector<AnchorRecord> anchors;
  if (r.falsified)
    anchors.push_back(AnchorRecord{r.theta_norm, r.theta_raw, r.witness});
  write_mining_outputs(config, problem, std::move(j), anchors, log);

  std::cout << "mine: falsified=" << (r.falsified ? "yes" : "no")
            << " robustness=" << format_double(r.gamma) << " theta=(";
  for (std::size_t k = 0; k < r.theta_raw.size(); ++k)
    std::cout << (k ? ", " : "") << format_double(r.theta_raw[k]);
  std::cout << ")\n";
  return 0;
}

int cmd_rgda(const RunConfig& config) {
  MiningProblem problem = make_problem(config);
  RgdaOptions options{config.rgda.iterations, config.optimizer, config.jobs};
  SimLog log;
  MiningOutcome outcome = rgda(problem, options, config.seed, &log);
  double volume = outcome.domain.volume(
      config.volume_samples, derive_seed(config.seed, kVolumeStream));

  json j = result_base(config, "rgda");
  j["monotonicity"] = outcome.domain.monotonicity();
  j["iterations"] = config.rgda.iterations;
  j["budget"] = config.optimizer.budget;
  j["simulations"] = log.size();
  j["anchors"] = anchors_json(outcome.domain.anchors());
  j["volume_estimate"] = volume;
  write_mining_outputs(config, problem, std::move(j),
                       outcome.domain.anchors(), log);

  std::cout << "rgda: anchors=" << outcome.domain.anchors().size()
            << " volume=" << format_double(volume)
            << " simulations=" << log.size() << "\n";
  return 0;
}

int cmd_sda(const RunConfig& config) {
  MiningProblem problem = make_problem(config);
  SdaOptions options{config.optimizer, config.sda.bias, config.sda.epsilon,
                     config.sda.max_positions, config.jobs};
  if (options.bias.empty())
    options.bias.assign(config.params.dim(), 1.0);
  SimLog log;
  MiningOutcome outcome = sda(problem, options, config.seed, &log);
  double volume = outcome.domain.volume(
      config.volume_samples, derive_seed(config.seed, kVolumeStream));

  json j = result_base(config, "sda");
  j["monotonicity"] = outcome.domain.monotonicity();
  j["epsilon"] = config.sda.epsilon;
  j["bias"] = json_vector(options.bias);
  j["max_positions"] = config.sda.max_positions;
  j["budget"] = config.optimizer.budget;
  j["positions"] = outcome.positions;
  j["waves"] = outcome.waves;
  j["simulations"] = log.size();
  j["anchors"] = anchors_json(outcome.domain.anchors());
  j["volume_estimate"] = volume;
  write_mining_outputs(config, problem, std::move(j),
                       outcome.domain.anchors(), log);

  std::cout << "sda: anchors=" << outcome.domain.anchors().size()
            << " positions=" << outcome.positions
            << " waves=" << outcome.waves
            << " volume=" << format_double(volume) << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& config) {
  MiningProblem problem = make_problem(config);
  const std::size_t eta = config.params.dim();
  if (eta == 0) throw std::invalid_argument("sweep needs parameters");
  const std::vector<std::size_t>& counts = config.sweep.counts;
  if (counts.size() != eta)
    throw std::invalid_argument(
        "sweep.counts must list one grid count per parameter");
  std::size_t total = 1;
  for (std::size_t c : counts) {
    if (c == 0 || total > config.sweep.max_points / c)
      throw std::invalid_argument("sweep grid exceeds sweep.max_points");
    total *= c;
  }

  const std::size_t nx = problem.search.x0_box.dim();
  const std::size_t nl = problem.search.inputs.dim();
  std::vector<double> x0 = config.sweep.x0.empty()
                               ? box_midpoint(problem.search.x0_box)
                               : config.sweep.x0;
  std::vector<double> lambda =
      config.sweep.lambda.empty()
          ? box_midpoint(problem.search.inputs.bounds())
          : config.sweep.lambda;
  if (x0.size() != nx || lambda.size() != nl)
    throw std::invalid_argument("sweep.x0 / sweep.lambda dimension mismatch");

  std::string csv;
  for (std::size_t k = 0; k < eta; ++k)
    csv += (k ? "," : "") + config.params.names[k];
  for (std::size_t k = 0; k < nl; ++k) csv += ",lambda_" + std::to_string(k);
  csv += ",robustness\n";

  TimedStateSequence trace = problem.system.simulate(x0, lambda);
  std::vector<std::size_t> idx(eta, 0);
  std::vector<double> theta(eta);
  std::size_t falsified = 0;
  for (std::size_t row = 0; row < total; ++row) {
    for (std::size_t k = 0; k < eta; ++k) {
      double lo = config.params.lower[k];
      double hi = config.params.upper[k];
      theta[k] = counts[k] == 1 ? lo
                                : lo + (hi - lo) *
                                           static_cast<double>(idx[k]) /
                                           static_cast<double>(counts[k] - 1);
    }
    Formula ground = instantiate(problem.formula, problem.params, theta);
    double rob = robustness(ground, trace, 0, problem.eval);
    if (rob <= 0.0) ++falsified;
    for (std::size_t k = 0; k < eta; ++k)
      csv += (k ? "," : "") + format_double(theta[k]);
    for (double v : lambda) csv += "," + format_double(v);
    csv += "," + format_double(rob) + "\n";
    for (std::size_t k = eta; k-- > 0;) {
      if (++idx[k] < counts[k]) break;
      idx[k] = 0;
    }
  }

  OutDir out = prepare_out(config);
  if (out.enabled) {
    write_file(out.dir / "sweep.csv", csv);
    json j = result_base(config, "sweep");
    j["counts"] = counts;
    j["rows"] = total;
    j["falsified_rows"] = falsified;
    j["x0"] = json_vector(x0);
    j["lambda"] = json_vector(lambda);
    write_file(out.dir / "result.json", j.dump(2) + "\n");
  }
  std::cout << "sweep: rows=" << total << " falsified=" << falsified << "\n";
  return 0;
}

}  // namespace tlmine
