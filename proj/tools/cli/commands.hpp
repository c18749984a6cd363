#pragma once

#include <iosfwd>
#include <string_view>

#include "cli/config.hpp"

namespace infocontract::cli {

enum class Command { analyze, solve, verify, refute, sweep, compare };

[[nodiscard]] Command parse_command(std::string_view name);
[[nodiscard]] std::string_view command_name(Command command) noexcept;

enum ExitCode : int { success = 0, config_error = 1, infeasible = 2 };

/// Runs one command, writes its artifacts under config.out and its JSON report to `report`.
/// Library errors propagate; run_guarded maps them to exit codes.
void run(Command command, const RunConfig& config, std::ostream& report);

/// run() with errors mapped to exit codes and messages written to `errors`.
[[nodiscard]] int run_guarded(Command command, const RunConfig& config, std::ostream& report, std::ostream& errors);

}  // namespace infocontract::cli
