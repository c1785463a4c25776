#pragma once

#include <ostream>

namespace copath {

/// Exit codes: 0 success, 2 usage or input problems, 3 numeric or data failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point behind the `copath` binary. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace copath
