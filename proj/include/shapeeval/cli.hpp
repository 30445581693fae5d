#ifndef SHAPEEVAL_CLI_HPP_
#define SHAPEEVAL_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace shapeeval {

// Exit statuses shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitEvaluationError = 2;

// Entry point for the `shapeeval` tool; `args` excludes the program name.
// Never throws: malformed input is reported on `err` with a non-zero status.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace shapeeval

#endif  // SHAPEEVAL_CLI_HPP_
