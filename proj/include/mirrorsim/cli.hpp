#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace mirrorsim {

/// Exit codes: 0 success, 1 usage or input validation, 2 broken internal
/// contract (a state, unitary, or invariant that should be impossible).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitContract = 2;

/// "key = value" lines, '#' comments, blank lines ignored. Throws
/// std::invalid_argument on malformed lines or unreadable files.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// The full command-line tool, callable in-process. args excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mirrorsim
