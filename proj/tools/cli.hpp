#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace simlr::cli {

// Exit codes: 0 success, 1 user/config error, 2 data error, 3 internal error.
enum ExitCode { kOk = 0, kUserError = 1, kDataError = 2, kInternalError = 3 };

// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace simlr::cli
