#pragma once

#include <iosfwd>

namespace paintph::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kIntegrityError = 3;

/// Entry point of the `paintph` tool. Never throws; errors are printed to
/// `err` and mapped onto the exit codes above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace paintph::cli
