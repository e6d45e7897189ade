#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slin::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,     // usage, parse or schema problems
  kExitNegative = 2,  // condition fails, verification fails, no certificate
  kExitDiverged = 3,  // numeric blow-up
};

/// Runs `slin <args...>` (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slin::cli
