#pragma once

#include <iosfwd>

namespace cvqa::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kConfigError = 2,
  kInputMissing = 3,
  kOutputError = 4,
  kNumericalError = 5,
  kNoSuccessfulRuns = 6,
  kUsage = 64,
};

/// Entry point of the cascade_vqa command line tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvqa::cli
