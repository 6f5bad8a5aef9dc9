#ifndef GENDIFF_CLI_HPP
#define GENDIFF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace gendiff::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageOrIo = 1,
  kMembershipRefused = 2,
  kDegenerate = 3,
  kCheckFailed = 4,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main_entry(int argc, char** argv);

} // namespace gendiff::cli

#endif
