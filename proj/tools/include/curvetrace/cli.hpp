#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvetrace {

/// Runs the command line given as arguments (without the program name).
/// Returns 0 on success, 2 on input errors, 3 when the solver degree cap
/// is exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvetrace
