#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace opdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;  // expectation mismatch or runtime failure
inline constexpr int kExitUsage = 2;

// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opdyn::cli
