#pragma once

#include <iosfwd>

namespace ctc {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `ctc` tool: subcommands index, query, eval and
/// gen-queries. Results go to `out` unless --out names a file.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ctc
