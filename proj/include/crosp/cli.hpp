#pragma once

// Command-line front end. run() holds the whole program so tests can drive it
// with in-memory streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace crosp {

enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitUsage = 2,
    kExitNumeric = 3,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace crosp
