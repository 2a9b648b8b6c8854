#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tangle {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "TANGLESIM_OUTPUT_DIR";

/// Runs one CLI invocation. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace tangle
