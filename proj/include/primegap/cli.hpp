#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace primegap::cli {

// Exit statuses: 0 success, 2 usage or invalid argument, 3 any other failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

// One invocation of the primegap command line; args excludes the program
// name. Reports go to out (or --out), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Doubles as they appear in reports: rounded to 15 significant digits.
double fixed15(double v);

}  // namespace primegap::cli
