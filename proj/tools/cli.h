#ifndef GREENNET_TOOLS_CLI_H
#define GREENNET_TOOLS_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace greennet {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitInvariant = 3;

// args[0] is the program name. The one-line summary goes to `out`, errors to
// `err`; everything else is written under --out.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace greennet

#endif  // GREENNET_TOOLS_CLI_H
