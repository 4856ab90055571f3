#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace madd::cli {

enum ExitCode : int { ok = 0, validation_failure = 1, runtime_failure = 2 };

/// Runs the command line `args` (without the program name). Data goes under
/// --out; human-readable output to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace madd::cli
