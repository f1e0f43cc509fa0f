#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rde::cli {

enum ExitCode : int {
    kOk = 0,
    kRejected = 2,
    kSolverFailure = 3,
    kInputError = 4,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rde::cli
