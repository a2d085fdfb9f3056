#ifndef DYFRAC_CLI_HPP
#define DYFRAC_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dyfrac {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verification_failed = 1;
inline constexpr int usage = 2;
}  // namespace exit_code

/// Runs the command line `args` (args[0] is the program name) with the
/// given streams. Never throws; returns 0, 1 or 2.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dyfrac

#endif  // DYFRAC_CLI_HPP
