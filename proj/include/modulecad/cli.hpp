#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modulecad {

/// Runs one command. `args` excludes the program name. Results go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modulecad
