#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relqi::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/*!
 * Runs one command. `args` excludes the program name. Output goes to `out`
 * (or to --out PATH), diagnostics to `err`. Returns the process exit code:
 * 0 success, 1 invalid input, 2 numerical failure.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relqi::cli
