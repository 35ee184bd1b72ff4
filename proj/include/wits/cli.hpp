#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wits::cli {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // simulate: a 4-stderr check failed
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one invocation; `args` excludes the program name.
/// Subcommands: curve, compare, simulate, psi, replay.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

}  // namespace wits::cli
