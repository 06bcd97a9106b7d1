#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace saedge {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

// Subcommands: gen-data, train, fit-thresholds, detect, simulate, plot-data,
// correlate. Errors are reported as one "error: <kind>: <reason>" line on `err`.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace saedge
