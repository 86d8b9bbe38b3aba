#pragma once

#include <ostream>

namespace twinbeam {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2, exit_degenerate = 3 };

/// Entry point of the `twinbeam` tool; errors are reported as one JSON
/// record per line on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twinbeam
