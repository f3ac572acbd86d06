#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perclab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsageError = 2;

/// Parses `args` (without the program name), runs the selected command and
/// writes its output and manifest. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Points "a:b:k": a + i b for i < k, or a b^i when geometric.
std::vector<double> parse_p_grid(const std::string& grid, bool geometric);

}  // namespace perclab
