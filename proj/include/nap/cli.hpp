#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nap {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the `nap` command line; args[0] is the program name.
/// Never throws: errors are reported on `err` and mapped to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nap
