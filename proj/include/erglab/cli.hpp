#pragma once

#include <ostream>

namespace erglab {

/// Exit codes of the command-line front-end.
enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitCheckFailed = 2 };

/// Runs one `erglab <command> ...` invocation. Reports go to `out` unless
/// --out names a file; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace erglab
