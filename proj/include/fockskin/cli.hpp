#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fockskin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the experiment driver. `args` excludes the program name.
/// Data goes to `out` when no --out file is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fockskin::cli
