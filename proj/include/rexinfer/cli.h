#ifndef REXINFER_CLI_H_
#define REXINFER_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace rexinfer {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInvariant = 3;

// Runs the command line (args excludes the program name). Returns the
// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rexinfer

#endif  // REXINFER_CLI_H_
