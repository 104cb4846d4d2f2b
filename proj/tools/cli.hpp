#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace delstab::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kIo = 2;
inline constexpr int kParse = 3;
inline constexpr int kPrecondition = 4;
inline constexpr int kCheckFailed = 5;

/// Runs one command. `args` excludes the program name. Reports go to --out
/// when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace delstab::cli
