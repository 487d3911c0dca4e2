#pragma once

#include "evoreg/config.hpp"
#include "evoreg/report.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evoreg {

enum class Subcommand { simulate, verify_det, verify_stoch, holder, isometry };

Subcommand parse_subcommand(std::string_view name);
std::string_view to_string(Subcommand sub);

/// Exit statuses of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_gate = 2, exit_check = 3, exit_io = 4 };

struct RunOptions {
    std::optional<std::uint64_t> seed;  // overrides mc.master_seed
    std::size_t workers = 0;            // 0: EVOREG_THREADS or hardware concurrency
};

struct RunResult {
    VerificationReport report;
    /// Path dumps keyed by file name, CSV with header "t,mode,value".
    std::vector<std::pair<std::string, std::string>> artifacts;
};

/// Throws GateViolation for subcommand-level gate failures.
RunResult run_scenario(const ScenarioConfig& config, Subcommand sub, const RunOptions& options = {});

/// CSV "t,mode,value" with one row per node and mode; values printed round-trip exact.
std::string trajectory_csv(const Trajectory& traj);
Trajectory parse_trajectory_csv(std::string_view text, double horizon);

}  // namespace evoreg
