#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsp::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kVerificationFailed = 2, kBudgetExceeded = 3 };

// Runs one invocation. `args` excludes the program name. Primary output goes
// to --out when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsp::cli
