#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sentinel {

/// Entry point of the `outage-sentinel` command line. `args` excludes the
/// program name. Returns the process exit code: 0 success, 2 usage,
/// 3 data/schema, 4 network model (islanding, singular).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sentinel
