#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netident::cli {

enum ExitCode : int {
  kIdentifiable = 0,
  kNotIdentifiable = 1,
  kInputError = 2,
  kDisagreement = 3,
};

/// Default output format comes from this variable (human or json).
inline constexpr const char* kFormatEnv = "NETIDENT_FORMAT";

/// Runs one command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace netident::cli
