#pragma once

#include <ostream>

namespace confla {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitPrecondition = 3, kExitInternal = 4 };

/// Runs the command line tool; reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace confla
