#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaugemode {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2 };

/// Command-line driver; args excludes the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace gaugemode
