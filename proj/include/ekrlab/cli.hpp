#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ekrlab {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2 };

/// Runs one command line (args exclude the program name). Structured output
/// goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ekrlab
