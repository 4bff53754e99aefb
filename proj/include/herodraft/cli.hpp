#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace herodraft::cli {

/// Environment variable naming the default reward model file.
inline constexpr const char* kModelEnv = "HERODRAFT_MODEL";

/// Runs one command; `args` excludes the program name. Returns 0 on success, 1 on a domain error (bad data,
/// illegal draft, unreadable files) and 2 on a usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace herodraft::cli
