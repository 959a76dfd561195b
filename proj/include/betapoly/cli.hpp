#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace betapoly {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_runtime = 2;

/// Runs one subcommand (sample, umax, constants, verify, simulate,
/// tailprobe). `args` excludes the program name. Results go to `out`
/// (or files), diagnostics and the one-line JSON error to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace betapoly
