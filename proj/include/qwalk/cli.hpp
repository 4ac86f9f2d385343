#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qwalk::cli {

enum ExitCode : int {
    kSuccess = 0,
    kHypothesis = 1,
    kSchema = 2,
    kNumerical = 3,
    kUsage = 4,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace qwalk::cli
