#pragma once

#include <string>
#include <vector>

namespace lin {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,       // runtime failure outside the categories below
    kExitHypothesis = 2,  // q >= 1, or a required condition is negative
    kExitConvergence = 3,
    kExitConfig = 4,
};

/// Runs the CLI with argv-style arguments (args[0] is the program name).
int run_cli(const std::vector<std::string>& args);

}  // namespace lin
