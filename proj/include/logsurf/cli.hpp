#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace logsurf::cli {

enum ExitCode { ok = 0, invariant_failure = 1, bad_input = 2, numerical_failure = 3 };

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logsurf::cli
