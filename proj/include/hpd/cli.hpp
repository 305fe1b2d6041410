#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hpd {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitNoConvergence = 3,
};

// Runs the `hpd` command line. `args` excludes the program name. Results go
// to `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hpd
