#pragma once

#include <string>
#include <vector>

namespace specgate {

/// Dispatches one CLI invocation. Exit codes: 0 success, 2 validation or
/// usage error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace specgate
