#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace swarmlimit {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitIo = 4,
};

/// Entry point of the `swarmlimit` tool; `args` excludes the program name.
/// Subcommands: run, limit-study, compare, laplace-check. Results go to
/// --out (or out_path, or `out` when neither is set); failures print one
/// line `error: code=<n> kind=<kind> message="<text>"` to `err`.
int cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swarmlimit
