#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace puretone::cli {

enum ExitCode : int { ok = 0, numerical_failure = 1, usage_error = 2, resonance_gate = 3 };

// Runs the command line; machine-readable errors go to `err` as one JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace puretone::cli
