#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssu::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kIngest = 2,
    kRuntime = 3,
};

/// Output directory used when --out is not given.
inline constexpr const char* kOutDirEnv = "SSU_OUT_DIR";

int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssu::cli
