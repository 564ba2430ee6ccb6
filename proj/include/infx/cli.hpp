#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infx {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Runs one command-line invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on a failed check or solver error, 2 on a usage or
/// configuration error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, const char* const* argv);

}  // namespace infx
