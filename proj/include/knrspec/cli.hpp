#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace knrspec {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation = 1;
inline constexpr int runtime = 2;
inline constexpr int usage = 64;
}  // namespace exit_code

/// Subcommands: sweep, transitions, eigensystem, validate. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace knrspec
