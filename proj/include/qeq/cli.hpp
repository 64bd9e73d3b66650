#pragma once

#include <iosfwd>

namespace qeq {

// Full CLI entry point, in-process testable.  Writes results to `out`
// (JSON or CSV per subcommand) and diagnostics to `err`; returns the
// process exit code (0 ok, 1 invalid input, 2 precision, 3 scale guard).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qeq
