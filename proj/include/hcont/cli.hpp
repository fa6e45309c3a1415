#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcont {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailure = 1,
    kExitUsage = 2,
    kExitScaleGuard = 3,
};

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1,2,5", "1 2 5" or "{1,2,5}"; empty text is ∅.
std::vector<unsigned> parse_vertex_list(const std::string& text);
/// Comma-separated reals.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace hcont
