#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anticorr::cli {

enum ExitCode : int {
    kSuccess = 0,
    kNumericFailure = 1,
    kUsageError = 2,
};

/// Runs the command line `anticorr <args...>` (program name excluded).
/// Reports go to out, diagnostics to err.
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

} // namespace anticorr::cli
