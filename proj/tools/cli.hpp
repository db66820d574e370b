#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scenelogic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // bad arguments, unreadable or malformed input
inline constexpr int kExitReasoning = 2;  // error flag, failed type check, byte budget exceeded

// Runs one command line (args excludes the program name) and returns the
// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scenelogic::cli
