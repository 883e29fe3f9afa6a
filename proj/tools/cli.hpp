// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scalelaw::cli {

/// Exit codes: 0 success, 2 domain error, 3 input error (bad flags, unreadable
/// or malformed files).
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitInput = 3;

/// Runs one command line (without the program name). Results go to `out`
/// unless redirected with -o; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1e9", "400M", "1.5B", "10T".
double parse_count(const std::string& text);

}  // namespace scalelaw::cli
