#pragma once

#include <ostream>
#include <span>
#include <string>

namespace shoga::cli {

inline constexpr const char* kVersion = "1.0.0";

// Exit codes: 0 success, 1 at least one FAIL row, 2 usage or input error.
// args excludes the program name; reports go to out, diagnostics to err.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace shoga::cli
