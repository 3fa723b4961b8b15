#pragma once

#include <string>
#include <vector>

namespace fuspos {

/// Runs one CLI invocation (args excludes the program name).
/// Exit codes: 0 success/certified, 2 not certified, 3 boundary-numeric,
/// 4 input error, 5 internal numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace fuspos
