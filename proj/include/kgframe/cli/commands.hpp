#pragma once

#include <iosfwd>

namespace kgframe {

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // bad arguments, unreadable or invalid program
  kExitEndpoint = 2,
  kExitTimeout = 3,
  kExitVerifyFailed = 4,
};

// Entry point of the `kgframe` tool: compile, run, verify, bench, explore.
// Normal output goes to `out`, diagnostics and row counts to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kgframe
