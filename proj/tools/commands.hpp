#ifndef COMPACTKNAP_TOOLS_COMMANDS_HPP
#define COMPACTKNAP_TOOLS_COMMANDS_HPP

#include <string>
#include <vector>

namespace compactknap::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kSolverFailure = 2, kPartial = 3 };

/// Runs the command line; returns the process exit code.
int run(int argc, char **argv);

} // namespace compactknap::cli

#endif
