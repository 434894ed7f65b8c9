#pragma once

#include <iosfwd>

namespace whed::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,  ///< bad flags or a referenced file that does not exist
  kData = 3,   ///< schema, data or I/O failure
  kNumerical = 4,
};

/// Entry point of the `whed` tool: simulate | process | replay | thumb | compare.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace whed::cli
