#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dakit/numerics.hpp"

namespace dakit::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

/// Runs one subcommand; args exclude the program name. Exit codes: 0 success, 1 input error
/// or bad flag, 2 validation failure, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "0.5", "-0.2i", "0.1+0.3i", "1e-3-2e-2i".
cplx parse_complex(const std::string& text);

}  // namespace dakit::cli
