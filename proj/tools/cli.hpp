#pragma once

#include <iosfwd>

namespace gabe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Subcommands: solve, match, tournament, report, verify-blocks.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gabe::cli
