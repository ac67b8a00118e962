#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "simulation.hpp"

namespace myopia {

/// Parses the sectioned key-value format:
///
///   [experiment]  model, strategy, horizon, discount, trials, replications,
///                 seed, diagnostics, diagnostics_replications, node_budget,
///                 word_count (memory only)
///   [param1], [param2]  name, lo, hi, count, true
///   [design]      name, lo, hi, count
///
/// Unknown sections or keys are rejected. Errors name the offending field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Inverse of parse_config; doubles are written in shortest round-trip form.
std::string emit_config(const ExperimentConfig& config);

std::vector<std::string> preset_names();
/// Bundled grid settings for "gap", "psychometric" and "memory".
ExperimentConfig preset(std::string_view name);

}  // namespace myopia
