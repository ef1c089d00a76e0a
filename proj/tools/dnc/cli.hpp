#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dnc::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kSpecError = 1,
  kSolverError = 2,
  kVerificationFailed = 3,
  kCapacityIllDefined = 4,
};

/// Runs one `dnc` invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Text-mode number formatting: five significant digits, fixed notation for
/// magnitudes in [1e-5, 1e5).
std::string format_value(double x);

}  // namespace dnc::cli
