// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 usage or configuration error.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arboreal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable overriding the default enumeration cap.
inline constexpr const char* kEnumerationCapEnv = "ARBOREAL_ENUM_CAP";

/// The cap from the environment, or the default when unset. Throws
/// std::invalid_argument for a malformed value.
int enumeration_cap_from_env();

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arboreal::cli
