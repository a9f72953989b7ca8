#pragma once

#include <ostream>

namespace semibandit {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitBadArguments = 2,
  kExitIo = 3,
};

// Entry point of the `semibandit` tool. Writes human output to `out` and
// diagnostics to `err`; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semibandit
