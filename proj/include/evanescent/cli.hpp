#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evanescent::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitParseError = 2,
  kExitValidationError = 3,
  kExitNumericalError = 4,
};

/// Maximum trace distance accepted by `validate`.
inline constexpr double kEquivalenceTolerance = 1e-6;

/// Runs the command line `args` (without the program name). Diagnostics go to
/// `err`; tables written without --out go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evanescent::cli
