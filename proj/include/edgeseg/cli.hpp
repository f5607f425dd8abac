#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace edgeseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitDomain = 4;

/// Runs one subcommand. `args` excludes the program name. Diagnostics go to
/// `err` as a single line; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgeseg::cli
