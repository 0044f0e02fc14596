#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace twistsel::cli {

enum Exit : int { kPass = 0, kUsage = 1, kComputation = 2, kVerification = 3 };

// Runs one command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twistsel::cli
