#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace idensity::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitProbeDecisive = 2;
inline constexpr int kExitInternal = 3;

/// Reads a key=value file. Blank lines and lines starting with '#' are
/// skipped; keys and values are trimmed. Throws ArgumentError.
std::map<std::string, std::string> load_config(const std::string& path);

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idensity::cli
