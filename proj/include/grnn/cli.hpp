#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace grnn::cli {

inline constexpr const char* kToolName = "grnn-lab";
inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int { kSuccess = 0, kDomainError = 1, kUsageError = 2 };

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

} // namespace grnn::cli
