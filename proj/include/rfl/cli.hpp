#pragma once

#include <string>
#include <vector>

namespace rfl::cli {

/// Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 1 anything else.
int run(int argc, const char* const* argv);
/// Same, with argv[0] omitted.
int run(const std::vector<std::string>& args);

}  // namespace rfl::cli
