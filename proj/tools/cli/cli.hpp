#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rftkit::cli {

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

/// Runs one invocation. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`; "-" as an input path reads `in`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace rftkit::cli
