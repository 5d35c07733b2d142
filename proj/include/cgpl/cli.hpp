#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cgpl {

// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;       // configuration or context-condition failure
inline constexpr int kExitComposition = 2;  // resolution or composition failure
inline constexpr int kExitGeneration = 3;   // generation or i/o failure
inline constexpr int kExitUsage = 4;

/// Exit code for a stable violation/error code such as "CMP-CONSTRAINT".
int exit_code_for(std::string_view code);

/// Runs one invocation; `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cgpl
