#pragma once

// The experiment implementations behind the CLI: each writes its CSVs plus a
// summary.json (library version, resolved config, measured constants) under
// the configured output directory.

#include "config.hpp"

namespace pumrun {

void run_experiment(const ExperimentConfig& cfg);

}  // namespace pumrun
