#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsmv::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitMaxIter = 2,
  kExitNumericalFailure = 3,
  kExitUsage = 64,
};

/// Reads `key = value` lines ('#' starts a comment) and returns them as
/// `--key value` arguments.
std::vector<std::string> config_arguments(const std::string& path);

/// Runs one command line (without the program name). Config-file values
/// override flags given on the command line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsmv::cli
