#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace parrondo::cli {

/// Exit codes: 0 success, 1 runtime failure (I/O, invalid data), 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Data goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parrondo::cli
