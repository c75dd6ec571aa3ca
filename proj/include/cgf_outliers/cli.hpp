#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cgf_outliers {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `cgf-outliers` tool. Subcommands: simulate, returns,
// detect, evaluate, sweep. Errors go to `err` as one JSON object per line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace cgf_outliers
