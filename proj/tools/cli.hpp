#pragma once

#include <string>
#include <vector>

namespace moment_spectra::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 all checks passed, 2 a check failed, 1 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitCheckFailed = 2;

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args);

int run(int argc, const char* const* argv);

}  // namespace moment_spectra::cli
