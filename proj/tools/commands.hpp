#pragma once

#include "run_config.hpp"

namespace freqlab::cli {

// Each command writes its run folder and returns 0 (all checks pass) or 1
// (a check failed). Usage and resource problems surface as exceptions.
int cmd_density(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_counterexample(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);

}  // namespace freqlab::cli
