// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace ash::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the `ash` tool. Writes to `out`/`err` instead of the
/// process streams so it can be driven from tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ash::cli
