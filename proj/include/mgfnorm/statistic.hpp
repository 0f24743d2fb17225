#ifndef MGFNORM_STATISTIC_HPP
#define MGFNORM_STATISTIC_HPP

// The MGF-based statistic T_{n,gamma}: closed-form double sum, pointwise
// integrand (used by quadrature oracles), and its gamma -> infinity limit
// 2 b_{1,d} + btilde_{1,d} built from two skewness measures.

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mgfnorm/detail/summation.hpp"
#include "mgfnorm/errors.hpp"
#include "mgfnorm/linalg.hpp"

namespace mgfnorm {

enum class StatisticName { T, TLimit };

/// Value of T_{n,gamma} (or of its limit when gamma is +infinity).
///
/// For finite gamma, scaled = c(gamma, d) * raw with
/// c = 16 gamma^{2 + d/2} / pi^{d/2}. For the limit, raw = 2 b1 + btilde1 and
/// scaled = 100 * raw, the convention of published critical-value tables.
template <typename Scalar>
struct StatisticResult {
  StatisticName name = StatisticName::T;
  Scalar raw = 0;
  Scalar scaled = 0;
  Scalar gamma = 0;  // +infinity marks the limit statistic
  Index n = 0;
  Index d = 0;

  bool is_limit() const { return std::isinf(static_cast<double>(gamma)); }
};

struct TOptions {
  /// Permit 0 < gamma <= 2. The double sum is finite there, but the limit
  /// null distribution theory needs gamma > 2.
  bool allow_small_gamma = false;
};

/// Multiplier applied to the limit statistic in scaled output.
template <typename Scalar>
constexpr Scalar limit_table_factor() {
  return Scalar(100);
}

/// c(gamma, d) = 16 gamma^{2 + d/2} / pi^{d/2}.
template <typename Scalar>
Scalar t_scale_factor(Scalar gamma, Index d) {
  using std::pow;
  const Scalar half_d = static_cast<Scalar>(d) / Scalar(2);
  return Scalar(16) * pow(gamma, Scalar(2) + half_d) / pow(std::numbers::pi_v<Scalar>, half_d);
}

namespace detail {

template <typename Scalar>
void check_gamma(Scalar gamma, const TOptions& options) {
  if (!(gamma > Scalar(0)) || !std::isfinite(static_cast<double>(gamma))) {
    throw GammaTooSmall("gamma must be a finite positive number");
  }
  if (gamma <= Scalar(2) && !options.allow_small_gamma) {
    std::ostringstream msg;
    msg << "gamma = " << gamma
        << " <= 2: limit theory requires gamma > 2 (set allow_small_gamma to override)";
    throw GammaTooSmall(msg.str());
  }
}

template <typename Scalar>
void check_exponent(Scalar exponent, const char* where) {
  static const Scalar limit = std::log(std::numeric_limits<Scalar>::max());
  if (exponent > limit) {
    std::ostringstream msg;
    msg << where << ": exponent " << exponent
        << " overflows; the tuning parameter is too small for the spread of the residuals";
    throw Overflow(msg.str());
  }
}

}  // namespace detail

/// T_{n,gamma} via the closed-form double sum over pairs of residuals:
///   (1/n) (pi/gamma)^{d/2} sum_{j,k} exp(|Y+|^2 / (4 gamma))
///       * (Y_j.Y_k - |Y+|^2/(2 gamma) + d/(2 gamma) + |Y+|^2/(4 gamma^2)),
/// with Y+ = Y_j + Y_k. Only the diagonal and upper triangle are visited.
template <typename Scalar>
StatisticResult<Scalar> t_statistic(const ResidualSet<Scalar>& res, Scalar gamma,
                                    const TOptions& options = {}) {
  using std::exp;
  using std::pow;
  detail::check_gamma(gamma, options);

  const Index n = res.n();
  const Index d = res.d();
  const auto& gram = res.gram();
  const auto& sq = res.sq_norms();
  const Scalar dd = static_cast<Scalar>(d);
  const Scalar inv2g = Scalar(1) / (Scalar(2) * gamma);
  const Scalar inv4g = Scalar(1) / (Scalar(4) * gamma);
  const Scalar inv4g2 = inv4g / gamma;

  auto term = [&](Index j, Index k) {
    const Scalar plus = sq(j) + sq(k) + Scalar(2) * gram(j, k);
    const Scalar arg = plus * inv4g;
    detail::check_exponent(arg, "t_statistic");
    return exp(arg) * (gram(j, k) - plus * inv2g + dd * inv2g + plus * inv4g2);
  };

  detail::CompensatedSum<Scalar> sum;
  for (Index j = 0; j < n; ++j) {
    sum += term(j, j);
    for (Index k = j + 1; k < n; ++k) {
      sum += Scalar(2) * term(j, k);
    }
  }

  StatisticResult<Scalar> out;
  out.name = StatisticName::T;
  out.gamma = gamma;
  out.n = n;
  out.d = d;
  out.raw = pow(std::numbers::pi_v<Scalar> / gamma, dd / Scalar(2)) * sum.value() /
            static_cast<Scalar>(n);
  if (!std::isfinite(static_cast<double>(out.raw))) {
    throw Overflow("t_statistic: double sum is not finite");
  }
  out.scaled = t_scale_factor(gamma, d) * out.raw;
  return out;
}

/// ||M_n'(t) - t M_n(t)||^2 where M_n is the empirical MGF of the residuals.
/// T_{n,gamma} equals n times the integral of this against exp(-gamma |t|^2).
template <typename Scalar, typename Derived>
Scalar t_integrand(const ResidualSet<Scalar>& res, const Eigen::MatrixBase<Derived>& t) {
  if (t.size() != res.d()) {
    throw DimensionMismatch("t_integrand: t has the wrong length");
  }
  const Vector<Scalar> weights = (res.residuals() * t.derived()).array().exp().matrix();
  const Scalar mgf = weights.mean();
  const Vector<Scalar> grad =
      (res.residuals().transpose() * weights) / static_cast<Scalar>(res.n());
  return (grad - t.derived() * mgf).squaredNorm();
}

/// Mardia's skewness b_{1,d} = n^{-2} sum_{j,k} (Y_j.Y_k)^3.
template <typename Scalar>
Scalar mardia_skewness(const ResidualSet<Scalar>& res) {
  const Index n = res.n();
  const auto& gram = res.gram();
  detail::CompensatedSum<Scalar> sum;
  for (Index j = 0; j < n; ++j) {
    const Scalar diag = gram(j, j);
    sum += diag * diag * diag;
    for (Index k = j + 1; k < n; ++k) {
      const Scalar g = gram(j, k);
      sum += Scalar(2) * g * g * g;
    }
  }
  return sum.value() / static_cast<Scalar>(n * n);
}

/// Mori-Rohatgi-Szekely skewness n^{-2} sum_{j,k} Y_j.Y_k |Y_j|^2 |Y_k|^2.
template <typename Scalar>
Scalar mrs_skewness(const ResidualSet<Scalar>& res) {
  const Index n = res.n();
  const auto& gram = res.gram();
  const auto& sq = res.sq_norms();
  detail::CompensatedSum<Scalar> sum;
  for (Index j = 0; j < n; ++j) {
    sum += gram(j, j) * sq(j) * sq(j);
    for (Index k = j + 1; k < n; ++k) {
      sum += Scalar(2) * gram(j, k) * sq(j) * sq(k);
    }
  }
  return sum.value() / static_cast<Scalar>(n * n);
}

/// Mardia's kurtosis b_{2,d} = n^{-1} sum_j |Y_j|^4.
template <typename Scalar>
Scalar mardia_kurtosis(const ResidualSet<Scalar>& res) {
  detail::CompensatedSum<Scalar> sum;
  for (Index j = 0; j < res.n(); ++j) {
    sum += res.sq_norms()(j) * res.sq_norms()(j);
  }
  return sum.value() / static_cast<Scalar>(res.n());
}

/// 2 b_{1,d} + btilde_{1,d}: the pointwise limit of c(gamma, d) T_{n,gamma} / n
/// as gamma grows. For d = 1 it is three times the squared sample skewness.
template <typename Scalar>
Scalar limit_statistic(const ResidualSet<Scalar>& res) {
  return Scalar(2) * mardia_skewness(res) + mrs_skewness(res);
}

template <typename Scalar>
StatisticResult<Scalar> limit_result(const ResidualSet<Scalar>& res) {
  StatisticResult<Scalar> out;
  out.name = StatisticName::TLimit;
  out.gamma = std::numeric_limits<Scalar>::infinity();
  out.n = res.n();
  out.d = res.d();
  out.raw = limit_statistic(res);
  out.scaled = limit_table_factor<Scalar>() * out.raw;
  return out;
}

}  // namespace mgfnorm

#endif  // MGFNORM_STATISTIC_HPP
