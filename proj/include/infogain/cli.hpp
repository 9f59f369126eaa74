#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infogain {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

// Runs one `infogain` invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infogain
