#pragma once

// Plain-text configuration: one `key = value` per line, `#` starts a comment.
// Scenario keys mirror ScenarioConfig and SolverOptions field names; list
// values are comma separated.

#include <string>

#include "irs/experiment.hpp"

namespace irs {

/// Applies one key to the scenario. Returns false for unknown keys; throws
/// InvalidInput on malformed values.
bool apply_scenario_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Throws InvalidInput with the line number on any malformed or unknown entry.
ExperimentSpec parse_experiment_config(const std::string& text);

/// Throws IoError when the file cannot be read.
ExperimentSpec load_experiment_config(const std::string& path);

double parse_double(const std::string& s);
long long parse_int(const std::string& s);

}  // namespace irs
