#pragma once

#include <string>
#include <vector>

namespace spirallab {
namespace cli {

// Runs one CLI invocation. args excludes the program name. Returns 0 when
// every check passed, 1 when any check failed, 2 on usage or input errors
// (no partial reports are written in that case).
int run(const std::vector<std::string>& args);

int run(int argc, char** argv);

}  // namespace cli
}  // namespace spirallab
