#ifndef MGFNORM_CLI_HPP
#define MGFNORM_CLI_HPP

#include <iosfwd>
#include <string_view>

namespace mgfnorm::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kSingular = 3,
  kBadRequest = 4,
};

/// Entry point of the mgfnorm command. Reports go to `out` (or to --out),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mgfnorm::cli

#endif  // MGFNORM_CLI_HPP
