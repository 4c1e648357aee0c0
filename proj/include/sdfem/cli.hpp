#pragma once

#include <iosfwd>

namespace sdfem {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitSolver = 3;

/// Entry point of the `sdfem` executable; reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdfem
