#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rftrap::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternal = 1,
  kValidation = 2,
  kSolverFailure = 3,
  kUnstable = 4,
};

// Entry point of the command-line tool; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rftrap::cli
