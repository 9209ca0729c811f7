#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pathgrad {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one CLI invocation (args exclude the program name) and returns the
/// process exit status: 0 success, 1 validation error, 2 runtime/model error.
/// Partially written output files are removed on failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pathgrad
