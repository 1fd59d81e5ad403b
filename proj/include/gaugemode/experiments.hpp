#pragma once

#include "gaugemode/emit.hpp"

namespace gaugemode {

/// Runs one experiment kind on a parsed config. Throws ConfigError when the config lacks what
/// the kind needs and SolverError (or ConvergenceError) when the eigensolver gives up.
Document run_experiment(const ExperimentConfig& cfg, ExperimentKind kind);

}  // namespace gaugemode
