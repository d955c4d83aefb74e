#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace etale {

// Runs one command line (args excludes the program name). Reports go to
// `out`, diagnostics to `err`. Exit codes: 0 all checks pass, 1 a check
// failed or an input file is malformed, 2 usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace etale
