#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ergomix {

enum ExitCode : int {
  kExitOk = 0,
  kExitGateFailed = 1,
  kExitInputError = 2,
  kExitDivergence = 3,
};

/// Entry point of the `ergomix` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ergomix
