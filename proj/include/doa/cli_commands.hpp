#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "doa/config.hpp"

namespace doa {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Exit codes shared by the CLI and the command functions.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> jobs;
};

ExperimentConfig apply_overrides(ExperimentConfig config, const RunOverrides& overrides);

// Each command loads + validates the config, runs the experiment, then
// writes all CSV outputs followed by manifest.json into out_dir. Returns an
// exit code; on config errors nothing is written.
int cmd_spectrum(const std::string& config_path, const std::string& out_dir,
                 const RunOverrides& overrides = {});
int cmd_rmse(const std::string& config_path, const std::string& out_dir,
             const RunOverrides& overrides = {});
int cmd_consistency(const std::string& config_path, const std::string& out_dir,
                    const RunOverrides& overrides = {});
int cmd_identifiability(int n_sensors, int rank_x, std::ostream& out);

// Numbers in CSV output carry 9 significant digits.
std::string format_number(double value);

}  // namespace doa
