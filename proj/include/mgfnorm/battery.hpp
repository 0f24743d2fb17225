#ifndef MGFNORM_BATTERY_HPP
#define MGFNORM_BATTERY_HPP

// Uniform handle on every statistic in the library, used by the Monte Carlo
// engine and the command line. Each test rejects for large scaled values.

#include <optional>
#include <string>
#include <string_view>

#include "mgfnorm/competitors.hpp"
#include "mgfnorm/linalg.hpp"
#include "mgfnorm/statistic.hpp"

namespace mgfnorm {

/// A statistic and its tuning parameter.
///
/// Labels: T:<gamma> (T:inf or Tinf for the limit), Z:<gamma>, HZ or HZ:<gamma>
/// (the data-driven bandwidth when omitted), HJ:<beta>, HJM:<gamma>, EN, MS, MK.
/// The compact forms T5, Z3, HJ5 are accepted too.
struct StatSpec {
  enum class Kind { T, TLimit, Zghoul, HZ, HJ, Energy, HJM, MardiaSkew, MardiaKurt };

  Kind kind = Kind::T;
  std::optional<double> tuning;
  bool allow_small_gamma = false;

  static StatSpec t(double gamma);  // +inf gives the limit statistic
  static StatSpec parse(std::string_view text);

  std::string label() const;
  bool needs_tuning() const;
  /// Throws InvalidSpec when the tuning is missing, superfluous or not
  /// positive; GammaTooSmall, BetaTooSmall or DimensionError for values
  /// outside a statistic's domain.
  void validate(Index d) const;
};

bool operator==(const StatSpec& a, const StatSpec& b);

/// Raw statistic and the value that is compared with critical values.
///
/// Scaled values: T -> c(gamma, d) T; limit -> 100 (2 b1 + btilde1);
/// MS -> n b1 / 6; MK -> |z|; every other statistic is its own scaled value.
struct StatValue {
  double raw = 0;
  double scaled = 0;
};

StatValue evaluate(const StatSpec& spec, const ResidualSet<double>& res);

inline double scaled_statistic(const StatSpec& spec, const ResidualSet<double>& res) {
  return evaluate(spec, res).scaled;
}

}  // namespace mgfnorm

#endif  // MGFNORM_BATTERY_HPP
