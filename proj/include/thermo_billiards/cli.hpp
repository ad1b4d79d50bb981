#pragma once

#include <ostream>

namespace tb {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitHorizon = 2,
  kExitNumerical = 3,
  kExitFail = 4,
  kExitInconclusive = 5,
};

/// Entry point of the `thermo_billiards` tool; returns the exit code.
/// Machine-readable summaries go to `out`, diagnostics to `err`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace tb
