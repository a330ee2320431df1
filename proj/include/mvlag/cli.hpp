#pragma once

// Command-line front end. run_cli is the whole program minus process setup,
// so tests can drive it with string arguments and captured streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace mvlag::cli {

enum ExitCode : int {
    kOk = 0,
    kViolation = 1,
    kUsage = 2,
    kDomain = 3,
    kIo = 4,
};

// args excludes the program name. Data goes to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvlag::cli
