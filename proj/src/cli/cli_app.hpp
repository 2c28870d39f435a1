#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrcmix::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInsufficientData = 4;

// dB <-> linear conversion happens exactly once, here.
double db_to_linear(double db);
double linear_to_db(double linear);

// Runs the full command line (argv without the program name) writing
// human-readable output to `out` and diagnostics to `err`. Returns the
// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mrcmix::cli
