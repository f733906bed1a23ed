#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace demix::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kComputationError = 1;
inline constexpr int kUsageError = 2;

/// Parses and runs one command line. args[0] is the program name.
/// Human-readable output goes to `out`, diagnostics to `err`; files go to --out.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b:step", inclusive of b up to rounding. Throws DomainError when malformed.
[[nodiscard]] std::vector<double> parse_grid(const std::string& text);

}  // namespace demix::cli
