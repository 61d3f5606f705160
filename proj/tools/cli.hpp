#pragma once

#include <iosfwd>

namespace v2x::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverFailure = 3, kValidationFailure = 4 };

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace v2x::cli
