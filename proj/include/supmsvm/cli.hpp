#ifndef SUPMSVM_CLI_HPP
#define SUPMSVM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace supmsvm {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Environment variable holding the default worker count.
inline constexpr const char* kThreadsEnv = "SUPMSVM_THREADS";

/**
 * @brief Runs the `supmsvm` tool. Subcommands: train, predict, simulate,
 * genes, transpose, lp-dump.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

} // namespace supmsvm

#endif
