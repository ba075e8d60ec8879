#pragma once

#include <iosfwd>

namespace fatou {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3, kExitSmallDivisor = 4 };

// Entry point of the fatoulab command line. Diagnostics go to `err`,
// one-line summaries to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fatou
