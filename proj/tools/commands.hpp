#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imst::cli {

/// Runs the `imst` command line with `args` (program name excluded).
/// Returns the process exit code; messages go to `out` / `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imst::cli
