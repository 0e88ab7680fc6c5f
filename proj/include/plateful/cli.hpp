#pragma once

#include <iosfwd>

namespace plateful {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `plateful` binary. Normal output goes to `out`, a
/// single diagnostic line to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace plateful
