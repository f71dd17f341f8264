#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sqg/config.hpp"
#include "sqg/verification.hpp"

namespace sqg {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verification_failure = 1;
inline constexpr int usage_error = 2;
inline constexpr int runtime_error = 3;
}  // namespace exit_code

struct ScenarioResult {
    int exit_code = exit_code::ok;
    std::vector<CheckResult> checks;
    std::vector<std::filesystem::path> artifacts;
    std::string message;  // empty on success
};

/// Evaluates (mode = exact) or simulates each case, writing into
/// config.output_dir:
///   <case>_t<time>.csv / .ppm   for every output time
///   report.csv                  one row per check
///   summary.json                status, failed checks, artifact list
///
/// Runtime errors (blowup, stability guard, I/O) are caught and reported
/// with exit_code::runtime_error; summary.json is still written when
/// possible.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// File-name stem for an output time: 0 → "t0", 0.25 → "t0.25".
std::string time_tag(double t);

}  // namespace sqg
