#pragma once

#include <string>
#include <vector>

namespace vqs {

/// Parses and runs one command line (arguments exclude the program name).
/// Returns the process exit code: 0 on success, 2 on a configuration or
/// input error, 3 on a numerical failure (singular metric, rejected plan,
/// uncovered term).
int run_cli(const std::vector<std::string>& args);

}  // namespace vqs
