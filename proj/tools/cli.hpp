#pragma once

#include <ostream>

namespace wban::cli {

enum ExitCode : int { kOk = 0, kInternalError = 1, kValidationFailed = 2 };

/// Full command-line entry point; diagnostics go to `err`, progress to `out`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wban::cli
