#include "mgfnorm/battery.hpp"

#include <cmath>
#include <limits>

#include "mgfnorm/detail/text.hpp"
#include "mgfnorm/errors.hpp"

namespace mgfnorm {

namespace {

struct Prefix {
  std::string_view text;
  StatSpec::Kind kind;
};

// Longest prefixes first so that "HJM" is not read as "HJ" + "M".
constexpr Prefix kPrefixes[] = {
    {"HJM", StatSpec::Kind::HJM}, {"HJ", StatSpec::Kind::HJ}, {"HZ", StatSpec::Kind::HZ},
    {"EN", StatSpec::Kind::Energy}, {"MS", StatSpec::Kind::MardiaSkew},
    {"MK", StatSpec::Kind::MardiaKurt}, {"Z", StatSpec::Kind::Zghoul}, {"T", StatSpec::Kind::T},
};

}  // namespace

StatSpec StatSpec::t(double gamma) {
  StatSpec s;
  if (std::isinf(gamma) && gamma > 0) {
    s.kind = Kind::TLimit;
  } else {
    s.kind = Kind::T;
    s.tuning = gamma;
  }
  return s;
}

StatSpec StatSpec::parse(std::string_view text) {
  const std::string_view t = detail::trim(text);
  for (const auto& p : kPrefixes) {
    if (t.substr(0, p.text.size()) != p.text) continue;
    std::string_view rest = t.substr(p.text.size());
    if (!rest.empty() && rest.front() == ':') rest.remove_prefix(1);
    StatSpec s;
    s.kind = p.kind;
    if (!rest.empty()) {
      const double v = detail::parse_double(rest, "statistic " + std::string(t));
      if (p.kind == Kind::T) return StatSpec::t(v);
      s.tuning = v;
    }
    return s;
  }
  throw ParseError("unknown statistic '" + std::string(t) +
                   "' (expected T:<gamma>, Z:<gamma>, HZ, HJ:<beta>, HJM:<gamma>, EN, MS or MK)");
}

std::string StatSpec::label() const {
  auto with = [&](const char* name) {
    return tuning ? std::string(name) + ":" + detail::format_shortest(*tuning) : std::string(name);
  };
  switch (kind) {
    case Kind::T:
      return with("T");
    case Kind::TLimit:
      return "T:inf";
    case Kind::Zghoul:
      return with("Z");
    case Kind::HZ:
      return with("HZ");
    case Kind::HJ:
      return with("HJ");
    case Kind::Energy:
      return "EN";
    case Kind::HJM:
      return with("HJM");
    case Kind::MardiaSkew:
      return "MS";
    case Kind::MardiaKurt:
      return "MK";
  }
  return "?";
}

bool StatSpec::needs_tuning() const {
  return kind == Kind::T || kind == Kind::Zghoul || kind == Kind::HJ || kind == Kind::HJM;
}

void StatSpec::validate(Index d) const {
  const std::string name = label();
  if (needs_tuning() && !tuning) throw InvalidSpec(name + ": a tuning parameter is required");
  const bool takes_tuning = needs_tuning() || kind == Kind::HZ;
  if (!takes_tuning && tuning) throw InvalidSpec(name + ": takes no tuning parameter");
  if (tuning && !(std::isfinite(*tuning) && *tuning > 0)) {
    throw InvalidSpec(name + ": tuning parameter must be finite and positive");
  }
  switch (kind) {
    case Kind::T:
      detail::check_gamma(*tuning, TOptions{allow_small_gamma});
      break;
    case Kind::Zghoul:
      if (d != 1) throw DimensionError(name + ": defined for d = 1 only");
      if (!(*tuning > 2)) throw GammaTooSmall(name + ": requires gamma > 2");
      break;
    case Kind::HJ:
      if (!(*tuning > 1)) throw BetaTooSmall(name + ": requires beta > 1");
      break;
    case Kind::HJM:
      if (!(*tuning > 1)) throw GammaTooSmall(name + ": requires gamma > 1");
      break;
    default:
      break;
  }
}

bool operator==(const StatSpec& a, const StatSpec& b) {
  return a.kind == b.kind && a.tuning == b.tuning && a.allow_small_gamma == b.allow_small_gamma;
}

StatValue evaluate(const StatSpec& spec, const ResidualSet<double>& res) {
  using Kind = StatSpec::Kind;
  StatValue v;
  switch (spec.kind) {
    case Kind::T: {
      const auto r = t_statistic(res, *spec.tuning, TOptions{spec.allow_small_gamma});
      v.raw = r.raw;
      v.scaled = r.scaled;
      return v;
    }
    case Kind::TLimit: {
      const auto r = limit_result(res);
      v.raw = r.raw;
      v.scaled = r.scaled;
      return v;
    }
    case Kind::Zghoul:
      v.raw = zghoul_statistic(res, *spec.tuning);
      break;
    case Kind::HZ:
      v.raw = hz_statistic(res, spec.tuning ? *spec.tuning : hz_default_gamma(res.n(), res.d()));
      break;
    case Kind::HJ:
      v.raw = hj_statistic(res, *spec.tuning);
      break;
    case Kind::Energy:
      v.raw = energy_statistic(res);
      break;
    case Kind::HJM:
      v.raw = hjm_statistic(res, *spec.tuning);
      break;
    case Kind::MardiaSkew: {
      const auto r = mardia_skew_test(res);
      v.raw = mardia_skewness(res);
      v.scaled = r.statistic;
      return v;
    }
    case Kind::MardiaKurt: {
      const auto r = mardia_kurt_test(res);
      v.raw = r.statistic;
      v.scaled = std::abs(r.statistic);
      return v;
    }
  }
  v.scaled = v.raw;
  return v;
}

}  // namespace mgfnorm
