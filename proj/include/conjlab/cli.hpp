#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conjlab {

// Exit codes: 0 success, 1 check failure, 2 input error, 3 certificate failure.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInputError = 2, kExitCertificateFailed = 3 };

// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conjlab
