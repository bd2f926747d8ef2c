#pragma once

#include <ostream>
#include <string>

#include "vexs/scenario.hpp"

namespace vexs {

// Exit codes of the command line runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDivergence = 3;

// "family" or "family:key=value,key=value"; list values use ';' between
// entries. Numbers are parsed as JSON numbers, anything else stays a string.
json parse_family_spec(const std::string& text, int dimension);

// Parses argv, builds the scenario (config file merged with flags), runs it
// and writes the outputs. Returns one of the exit codes above.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vexs
