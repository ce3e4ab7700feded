#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace iraloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Environment variable naming the default report directory.
inline constexpr const char* kReportDirEnv = "IRALOC_REPORT_DIR";

/// Entry point. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Every flag of every subcommand with its help text, keyed by subcommand.
std::map<std::string, std::vector<std::pair<std::string, std::string>>> flag_catalog();

}  // namespace iraloc::cli
