#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gibbs_tree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitIo = 3;

/// Runs one gibbs-tree invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gibbs_tree::cli
