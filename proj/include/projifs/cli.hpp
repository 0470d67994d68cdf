#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace projifs {

inline constexpr const char* kVersion = "projifs 1.0.0";

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitInconclusive = 2 };

// args excludes the program name. CSV goes to out, diagnostics to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace projifs
