#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gammadisc::cli {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kInputError = 2 };

/// Runs the command line (args excludes the program name). Output goes to out/err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gammadisc::cli
