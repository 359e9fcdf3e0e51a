#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qminv::cli {

enum ExitCode : int {
  kSuccess = 0,
  kSolverFailure = 1,
  kUsageError = 2,
  kVerificationFailure = 3,
};

/// Runs one subcommand (generate, solve, sweep, analyze, verify). Data goes
/// to `out`, diagnostics to `err`. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qminv::cli
