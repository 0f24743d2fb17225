#ifndef MGFNORM_DETAIL_TEXT_HPP
#define MGFNORM_DETAIL_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace mgfnorm::detail {

/// Shortest decimal string that reads back to the same double.
std::string format_shortest(double value);

/// Scientific notation with 17 significant digits.
std::string format_exact(double value);

/// Parses a whole token as a double ("inf" and "infinity" accepted). Throws
/// ParseError naming `what` on failure.
double parse_double(std::string_view token, std::string_view what);

long long parse_integer(std::string_view token, std::string_view what);

std::vector<std::string_view> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

}  // namespace mgfnorm::detail

#endif  // MGFNORM_DETAIL_TEXT_HPP
