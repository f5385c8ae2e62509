#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace saguin {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
};

/// Entry point of the `saguin` tool. args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);
int cli_main(int argc, char** argv);

/// Keeps training-sized matrix buffers on the heap instead of fresh mappings
/// per allocation. No effect outside glibc.
void configure_allocator();

}  // namespace saguin
