#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hanklab::cli {

/// Parses `args` (without the program name), runs the subcommand and returns
/// the process exit code: 0 success, 2 configuration or usage error, 3 budget
/// exceeded, 4 numerical failure, 1 anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hanklab::cli
