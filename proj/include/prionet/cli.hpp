#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prionet::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kModelError = 1,
  kNumericalFailure = 2,
  kUsageError = 3,
};

/// Runs the command line `args` (without the program name). Human-readable
/// reports go to `out`, or to `err` when the machine payload is sent to
/// standard output with `--out -`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prionet::cli
