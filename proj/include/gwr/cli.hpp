#pragma once

#include <iosfwd>

namespace gwr::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 validation failure.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kValidationError = 2;

/// Entry point for the `gwr` tool: gen-data, run, compare, snapshot-dump.
int run(int argc, const char* const* argv);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gwr::cli
