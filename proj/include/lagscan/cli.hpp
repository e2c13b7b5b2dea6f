#pragma once

#include <string>
#include <vector>

namespace lagscan {

/// Entry point shared by the binary and the test harness. Returns the
/// process exit code: 0 pass, 1 tool error, 2 gate failure.
int run_cli(const std::vector<std::string>& args);

} // namespace lagscan
