#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eddy {

/// Exit codes of the eddyeq tool.
enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitNoConvergence = 2 };

/// Run the command line `args` (args[0] is the program name). Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace eddy
