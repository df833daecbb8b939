#pragma once

#include <string>

#include "tlmine/runconfig.hpp"

namespace tlmine {

// Command bodies behind the command-line front end. Each returns the
// process exit code and, when config.out is set, writes its artifact files
// (result.json plus anchors.csv / runlog.csv / sweep.csv as applicable)
// into that directory. Failures are reported by throwing; the front end
// maps exceptions to exit code 2.

// Evaluates the (ground) formula on a recorded trace; trace_path overrides
// config.robustness.trace. Exits 0 when robustness > 0, 1 otherwise.
int cmd_robustness(const RunConfig& config, const std::string& trace_path);

int cmd_mine(const RunConfig& config);
int cmd_rgda(const RunConfig& config);
int cmd_sda(const RunConfig& config);
int cmd_sweep(const RunConfig& config);

}  // namespace tlmine
