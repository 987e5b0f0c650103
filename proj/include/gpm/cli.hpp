#pragma once

#include <string>
#include <vector>

namespace gpm::cli {

/// Entry point for the gpmtool binary. Subcommands: gen, solve, eval, oracle,
/// bench, render. Returns the process exit code (0 on success; errors print a
/// single "error: ..." line on stderr).
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

} // namespace gpm::cli
