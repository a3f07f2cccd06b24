#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chanqed::cli {

enum ExitCode : int { ok = 0, config_error = 1, numeric_error = 2, validity_error = 3 };

/// Runs the command line; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chanqed::cli
