#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ropt::maxcut {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitUncertified = 2;
inline constexpr int kExitCheckFailed = 3;

/// Entry point of the `maxcut` tool; args exclude the program name.
///
///   maxcut solve --graph PATH [--rank R] [--escalate] [--trials N] [--tol T]
///                [--seed S] [--solver tr|cg|sd] [--out text|json|csv]
///                [--history PATH] [--timing]
///   maxcut check --graph PATH [--rank R] [--seed S] [--slopes PREFIX]
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ropt::maxcut
