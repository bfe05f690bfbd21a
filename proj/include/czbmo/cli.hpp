#pragma once

#include <string>
#include <vector>

namespace czbmo {

// Exit codes: 0 success, 1 FAIL verdicts present, 2 config error,
// 3 numerical failure.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // without argv[0]

// Built-in cube families for --preset.
std::vector<class Cube> preset_family(const std::string& name);

}  // namespace czbmo
