#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amt::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_validation = 2,
    exit_verification_failed = 3,
};

/// Runs one CLI invocation; `args` excludes the program name. Data goes to
/// `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace amt::cli
