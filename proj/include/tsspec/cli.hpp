#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tsspec {

/// Command-line entry point (validate / solve / verify / convert /
/// make-timescale). Returns the process exit code: 0 all checks pass,
/// 1 failed checks or violated invariants, 2 usage or parse errors.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace tsspec
