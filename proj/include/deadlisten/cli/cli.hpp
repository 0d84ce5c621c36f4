#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace deadlisten::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitError = 2;

// Runs one command line (without the program name) and returns the exit
// code: 0 on success or no findings, 1 when `check` reports findings, 2 on
// usage or operational errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deadlisten::cli
