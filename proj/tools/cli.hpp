#pragma once

#include <iosfwd>

namespace monadforge::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kSchemaError = 2,  // also used for command-line usage errors
  kDegenerate = 3,
  kNotIntegrable = 4,
  kPartialFailure = 5,
  kUnsampleable = 6,
  kCheckFailed = 7,  // a certificate, report cell or selftest criterion failed
};

/// Entry point behind the `monadforge` binary. Reads MONADFORGE_TOL for the
/// default base tolerance (a --tol flag takes precedence).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monadforge::cli
