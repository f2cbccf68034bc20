#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hornfolio::cli {

enum ExitStatus : int { kDone = 0, kUsage = 1, kInputError = 2, kInternalError = 3 };

/// Entry point behind the hornfolio executable. `args` excludes the program
/// name. Verdicts and requested output go to `out`, diagnostics to `err`.
/// Subcommands: solve, emit-c, classify, oracle, bench.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hornfolio::cli
