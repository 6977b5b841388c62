#pragma once

#include <string>
#include <vector>

namespace census {

/// Runs one `census` command line (args excludes the program name).
/// Returns the process exit status; diagnostics go to stderr.
int run_cli(const std::vector<std::string>& args);

}  // namespace census
