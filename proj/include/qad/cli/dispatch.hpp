#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics and usage text for errors to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qad::cli
