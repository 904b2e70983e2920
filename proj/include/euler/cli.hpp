// Command-line front end: one binary, one subcommand per module.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace euler {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitParse = 4;

// args excludes the program name. JSON (CSV for sweep) goes to out, a human
// summary and diagnostics to err; `--spec -` reads from in.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace euler
