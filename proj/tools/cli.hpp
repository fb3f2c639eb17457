#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lca::cli {

enum ExitCode : int { kOk = 0, kViolated = 1, kInvalidInput = 2 };

/// Runs one command; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lca::cli
