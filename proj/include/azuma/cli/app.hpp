#pragma once

#include <ostream>

namespace azuma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // a check that was expected to pass did not
inline constexpr int kExitUsage = 2;        // bad flags, bad config, domain errors
inline constexpr int kExitResource = 3;     // draw budget, file system

// Output directory override; the only environment variable consulted.
inline constexpr const char* kOutDirEnv = "AZUMA_OUT_DIR";

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace azuma::cli
