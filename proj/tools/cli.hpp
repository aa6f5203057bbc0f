#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mgs::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int infeasible = 2;
inline constexpr int unresolved = 3;
}  // namespace exit_code

/// Runs one command line (args[0] is the program name). Human summaries go
/// to `out` (or JSON with --json), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mgs::cli
