#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mgen::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kFalse = 1,  // the set is not m-general, or a certificate failed to verify
  kUsage = 2,  // bad arguments, unreadable input, violated precondition
  kLimits = 3, // exact search stopped by a node or time limit
};

/// Runs the command line given as argv[1..]; the program name is not
/// included. Everything meant for the user goes to out or err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mgen::cli
