#pragma once

#include <string>

#include "doa/harness.hpp"

namespace doa {

// Parses an experiment config (or a manifest wrapping one under "config").
// Unknown keys are rejected with a message naming the key; JSON syntax
// errors are reported with their line number. Throws std::invalid_argument.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

// Fully resolved round-trippable form (defaults filled in).
std::string config_to_json(const ExperimentConfig& config);

}  // namespace doa
