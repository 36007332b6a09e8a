#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scl_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // audit check failed or internal certificate failure
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInconclusive = 3;

/// Runs one command line (without the program name). Records go to `out`
/// as JSON lines, or as aligned tables with --table; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scl_lab::cli
