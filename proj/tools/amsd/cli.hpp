#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amsd::cli {

/// Runs one `amsd` invocation. Returns the process exit code; failures print a single
/// diagnostic line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Environment variable naming the default --out-dir.
inline constexpr const char* kOutDirEnv = "AMSD_OUT_DIR";

}  // namespace amsd::cli
