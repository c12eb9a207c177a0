#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linnik::cli {

/// Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 estimation failure.
enum ExitCode : int { kOk = 0, kIoError = 1, kUsage = 2, kEstimation = 3 };

/// Runs the command line `args` (args[0] is the program name) writing normal
/// output to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linnik::cli
