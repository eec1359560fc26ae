#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mqmi::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kPropertyFailures = 1;  // verify found failures
inline constexpr int kParseFailure = 2;      // bad arguments or state/channel spec
inline constexpr int kDimensionFailure = 3;  // dimension or partition mismatch
inline constexpr int kNumericalFailure = 4;  // invalid state or channel

/// Runs one command. `args` excludes the program name. Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "%.6g" with -0 printed as 0 and |x| < zero_below printed as 0.
std::string format_number(double x, double zero_below);

}  // namespace mqmi::cli
