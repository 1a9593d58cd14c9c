#pragma once

#include <iosfwd>

namespace rldp {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitSearch = 4;

// Parses argv, runs one subcommand and writes its table to `out` (or to the configured
// output file). Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rldp
