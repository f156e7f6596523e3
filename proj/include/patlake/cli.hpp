#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace patlake {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitNoResult = 1,
    kExitUsage = 2,
    kExitIo = 3,
};

/// Runs one invocation. `args` excludes the program name. TSV results go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patlake
