#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divexp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kOracleFailure = 3 };

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out` (or --out), diagnostics to `err`. DIVEXP_SEED, when set, replaces
/// the default seed of the Monte Carlo subcommands.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divexp::cli
