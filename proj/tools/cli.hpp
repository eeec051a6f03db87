#ifndef NGI_TOOLS_CLI_HPP
#define NGI_TOOLS_CLI_HPP

#include "envelope.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Bad flags or flag combinations; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `a:b:step` (inclusive of b up to rounding), a comma list, or a single value.
std::vector<double> parse_grid(const std::string& text);

/// A non-negative integer, also accepted in exponent form ("1e6").
std::uint64_t parse_count(const std::string& text);

/// Runs the tool; argv[0] is the program name. Returns the process exit code.
/// Results go to `out` (or the --out file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ngi::cli

#endif  // NGI_TOOLS_CLI_HPP
