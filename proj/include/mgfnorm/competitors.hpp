#ifndef MGFNORM_COMPETITORS_HPP
#define MGFNORM_COMPETITORS_HPP

// Benchmark normality tests, each evaluated on a ResidualSet:
// Zghoul Z_n, Henze-Zirkler HZ_n, Henze-Jimenez-Gamero HJ_n, the energy test
// EN_n, Henze-Jimenez-Gamero-Meintanis HM_n, and Mardia's skewness and
// kurtosis tests with their asymptotic p-values.
//
// Printed closed forms of Z_n, HJ_n and HM_n contain index and bracket typos;
// the versions here are re-derived from the integral definitions and checked
// against quadrature in the test suite.

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "mgfnorm/detail/summation.hpp"
#include "mgfnorm/errors.hpp"
#include "mgfnorm/linalg.hpp"
#include "mgfnorm/statistic.hpp"

namespace mgfnorm {

/// Statistic with its asymptotic p-value.
template <typename Scalar>
struct TestOutcome {
  Scalar statistic = 0;
  Scalar p_value = 1;
};

/// Z_n(gamma) = n int (M_n(t) - e^{t^2/2})^2 e^{-gamma t^2} dt, d = 1 only:
///   sqrt(pi) [ n / sqrt(gamma-1) - 2/sqrt(gamma-1/2) sum_i exp(Y_i^2/(4 gamma-2))
///              + 1/(n sqrt(gamma)) sum_{i,j} exp((Y_i+Y_j)^2/(4 gamma)) ].
template <typename Scalar>
Scalar zghoul_statistic(const ResidualSet<Scalar>& res, Scalar gamma) {
  using std::exp;
  using std::sqrt;
  if (res.d() != 1) {
    throw DimensionError("zghoul_statistic: defined for univariate data only");
  }
  if (!(gamma > Scalar(2))) {
    throw GammaTooSmall("zghoul_statistic: requires gamma > 2");
  }
  const Index n = res.n();
  const auto& gram = res.gram();
  const auto& sq = res.sq_norms();

  detail::CompensatedSum<Scalar> single;
  for (Index i = 0; i < n; ++i) {
    const Scalar arg = sq(i) / (Scalar(4) * gamma - Scalar(2));
    detail::check_exponent(arg, "zghoul_statistic");
    single += exp(arg);
  }
  detail::CompensatedSum<Scalar> pairs;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const Scalar arg = (sq(i) + sq(j) + Scalar(2) * gram(i, j)) / (Scalar(4) * gamma);
      detail::check_exponent(arg, "zghoul_statistic");
      pairs += (i == j ? Scalar(1) : Scalar(2)) * exp(arg);
    }
  }
  const Scalar nn = static_cast<Scalar>(n);
  return sqrt(std::numbers::pi_v<Scalar>) *
         (nn / sqrt(gamma - Scalar(1)) - Scalar(2) / sqrt(gamma - Scalar(0.5)) * single.value() +
          pairs.value() / (nn * sqrt(gamma)));
}

/// Henze-Zirkler bandwidth (1/sqrt 2) ((2d+1) n / 4)^{1/(d+4)}.
template <typename Scalar = double>
Scalar hz_default_gamma(Index n, Index d) {
  using std::pow;
  using std::sqrt;
  const Scalar base = (Scalar(2) * static_cast<Scalar>(d) + Scalar(1)) * static_cast<Scalar>(n) /
                      Scalar(4);
  return pow(base, Scalar(1) / static_cast<Scalar>(d + 4)) / sqrt(Scalar(2));
}

/// HZ_n(gamma): weighted L2 distance between the empirical characteristic
/// function and e^{-|t|^2/2} under the N(0, gamma^2 I) weight density.
template <typename Scalar>
Scalar hz_statistic(const ResidualSet<Scalar>& res, Scalar gamma) {
  using std::exp;
  using std::pow;
  if (!(gamma > Scalar(0))) {
    throw GammaTooSmall("hz_statistic: requires gamma > 0");
  }
  const Index n = res.n();
  const auto& gram = res.gram();
  const auto& sq = res.sq_norms();
  const Scalar g2 = gamma * gamma;
  const Scalar half_d = static_cast<Scalar>(res.d()) / Scalar(2);

  detail::CompensatedSum<Scalar> pairs;
  for (Index j = 0; j < n; ++j) {
    pairs += Scalar(1);
    for (Index k = j + 1; k < n; ++k) {
      const Scalar dist2 = sq(j) + sq(k) - Scalar(2) * gram(j, k);
      pairs += Scalar(2) * exp(-g2 / Scalar(2) * dist2);
    }
  }
  detail::CompensatedSum<Scalar> single;
  for (Index j = 0; j < n; ++j) {
    single += exp(-g2 * sq(j) / (Scalar(2) * (Scalar(1) + g2)));
  }
  const Scalar nn = static_cast<Scalar>(n);
  return pairs.value() / (nn * nn) -
         Scalar(2) * pow(Scalar(1) + g2, -half_d) * single.value() / nn +
         pow(Scalar(1) + Scalar(2) * g2, -half_d);
}

/// HJ_n(beta) = n int (M_n(t) - e^{|t|^2/2})^2 e^{-beta |t|^2} dt:
///   pi^{d/2} { n^{-1} beta^{-d/2} sum_{j,k} exp(|Y_j+Y_k|^2/(4 beta))
///              + n (beta-1)^{-d/2} - 2 (beta-1/2)^{-d/2} sum_j exp(|Y_j|^2/(4 beta-2)) }.
template <typename Scalar>
Scalar hj_statistic(const ResidualSet<Scalar>& res, Scalar beta) {
  using std::exp;
  using std::pow;
  if (!(beta > Scalar(1))) {
    throw BetaTooSmall("hj_statistic: requires beta > 1");
  }
  const Index n = res.n();
  const auto& gram = res.gram();
  const auto& sq = res.sq_norms();
  const Scalar half_d = static_cast<Scalar>(res.d()) / Scalar(2);

  detail::CompensatedSum<Scalar> pairs;
  for (Index j = 0; j < n; ++j) {
    for (Index k = j; k < n; ++k) {
      const Scalar arg = (sq(j) + sq(k) + Scalar(2) * gram(j, k)) / (Scalar(4) * beta);
      detail::check_exponent(arg, "hj_statistic");
      pairs += (j == k ? Scalar(1) : Scalar(2)) * exp(arg);
    }
  }
  detail::CompensatedSum<Scalar> single;
  for (Index j = 0; j < n; ++j) {
    single += exp(sq(j) / (Scalar(4) * beta - Scalar(2)));
  }
  const Scalar nn = static_cast<Scalar>(n);
  return pow(std::numbers::pi_v<Scalar>, half_d) *
         (pow(beta, -half_d) * pairs.value() / nn + nn * pow(beta - Scalar(1), -half_d) -
          Scalar(2) * pow(beta - Scalar(0.5), -half_d) * single.value());
}

/// E|Z| for Z ~ N_d(0, I): sqrt(2) Gamma((d+1)/2) / Gamma(d/2).
template <typename Scalar>
Scalar expected_gaussian_norm(Index d) {
  using std::exp;
  using std::lgamma;
  using std::sqrt;
  const Scalar dd = static_cast<Scalar>(d);
  return sqrt(Scalar(2)) * exp(lgamma((dd + Scalar(1)) / Scalar(2)) - lgamma(dd / Scalar(2)));
}

/// E|a - Z| for Z ~ N_d(0, I), given |a|^2.
///
/// Equals sqrt(2) Gamma((d+1)/2)/Gamma(d/2) 1F1(-1/2; d/2; -|a|^2/2). Small
/// arguments use the alternating power series directly; larger ones use the
/// Kummer-transformed series e^{-x} 1F1(d/2 + 1/2; d/2; x), whose terms are
/// all positive, so no precision is lost to cancellation.
template <typename Scalar>
Scalar expected_norm_to_gaussian(Scalar a_sq_norm, Index d) {
  using std::abs;
  using std::exp;
  const Scalar lead = expected_gaussian_norm<Scalar>(d);
  const Scalar half_d = static_cast<Scalar>(d) / Scalar(2);
  const Scalar x = a_sq_norm / Scalar(2);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();

  if (a_sq_norm <= Scalar(4)) {
    // 1F1(-1/2; d/2; -x) = sum_k (-1/2)_k / (d/2)_k (-x)^k / k!
    Scalar term = Scalar(1);
    Scalar sum = Scalar(1);
    for (int k = 0; k < 200; ++k) {
      const Scalar kk = static_cast<Scalar>(k);
      term *= (Scalar(-0.5) + kk) / (half_d + kk) * (-x) / (kk + Scalar(1));
      sum += term;
      if (abs(term) <= eps * abs(sum)) {
        return lead * sum;
      }
    }
    throw SeriesNonConvergence("expected_norm_to_gaussian: power series did not converge");
  }

  if (x > Scalar(600)) {
    std::ostringstream msg;
    msg << "expected_norm_to_gaussian: |a|^2 = " << a_sq_norm << " exceeds the series budget";
    throw SeriesNonConvergence(msg.str());
  }
  // e^{-x} sum_k (d/2 + 1/2)_k / (d/2)_k x^k / k!
  const int budget = 200 + static_cast<int>(Scalar(4) * x);
  Scalar term = Scalar(1);
  detail::CompensatedSum<Scalar> sum;
  sum += term;
  for (int k = 0; k < budget; ++k) {
    const Scalar kk = static_cast<Scalar>(k);
    term *= (half_d + Scalar(0.5) + kk) / (half_d + kk) * x / (kk + Scalar(1));
    sum += term;
    if (kk > x && term <= eps * sum.value()) {
      return lead * exp(-x) * sum.value();
    }
  }
  throw SeriesNonConvergence("expected_norm_to_gaussian: Kummer series did not converge");
}

/// Energy statistic
///   n ( 2/n sum_j E|Y_j - Z| - E|Z - Z'| - n^{-2} sum_{j,k} |Y_j - Y_k| ),
/// with E|Z - Z'| = 2 Gamma((d+1)/2) / Gamma(d/2).
template <typename Scalar>
Scalar energy_statistic(const ResidualSet<Scalar>& res) {
  using std::max;
  using std::sqrt;
  const Index n = res.n();
  const Index d = res.d();
  const auto& gram = res.gram();
  const auto& sq = res.sq_norms();

  detail::CompensatedSum<Scalar> to_gaussian;
  for (Index j = 0; j < n; ++j) {
    to_gaussian += expected_norm_to_gaussian(sq(j), d);
  }
  detail::CompensatedSum<Scalar> pairwise;
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      pairwise += Scalar(2) * sqrt(max(Scalar(0), sq(j) + sq(k) - Scalar(2) * gram(j, k)));
    }
  }
  const Scalar nn = static_cast<Scalar>(n);
  const Scalar gaussian_pair = sqrt(Scalar(2)) * expected_gaussian_norm<Scalar>(d);
  return nn * (Scalar(2) / nn * to_gaussian.value() - gaussian_pair -
               pairwise.value() / (nn * nn));
}

struct HjmOptions {
  /// The four-fold sum costs O(n^4); larger samples need allow_large_sample.
  Index max_n = 100;
  bool allow_large_sample = false;
};

/// HM_n(gamma) = n int ( C_n(t) M_n(t) - 1 )^2 e^{-gamma |t|^2} dt, where C_n
/// is the empirical mean of cos(t.Y_j) and M_n the empirical MGF.
///
/// Closed form (pi/gamma)^{d/2} { S4 / (2 n^3) - (2/n) S2 + n } with
///   S4 = sum_{j,k,l,m} e^{(|Y+_jk|^2 - |Y-_lm|^2)/(4g)} cos(Y+_jk.Y-_lm/(2g))
///                    + e^{(|Y+_jk|^2 - |Y+_lm|^2)/(4g)} cos(Y+_jk.Y+_lm/(2g)),
///   S2 = sum_{j,k} e^{(|Y_k|^2 - |Y_j|^2)/(4g)} cos(Y_j.Y_k/(2g)).
/// S4 is evaluated through the factorisation
///   e^{i Y+_jk.Y(+/-)_lm / (2g)} = E_jl E_kl (E_jm E_km)^{(+/-)1},
/// E = exp(i G / (2g)), which turns the inner double sum into a complex
/// bilinear form per unordered pair (j, k).
template <typename Scalar>
Scalar hjm_statistic(const ResidualSet<Scalar>& res, Scalar gamma, const HjmOptions& options = {}) {
  using std::cos;
  using std::exp;
  using std::pow;
  using Complex = std::complex<Scalar>;
  using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  if (!(gamma > Scalar(1))) {
    throw GammaTooSmall("hjm_statistic: requires gamma > 1");
  }
  const Index n = res.n();
  if (n > options.max_n && !options.allow_large_sample) {
    std::ostringstream msg;
    msg << "hjm_statistic: n = " << n << " exceeds the cap of " << options.max_n
        << " for the O(n^4) sum";
    throw SampleTooLarge(msg.str());
  }
  const auto& gram = res.gram();
  const auto& sq = res.sq_norms();
  const Scalar inv2g = Scalar(1) / (Scalar(2) * gamma);
  const Scalar inv4g = Scalar(1) / (Scalar(4) * gamma);

  detail::check_exponent(sq.maxCoeff() * Scalar(4) * inv4g, "hjm_statistic");

  const ComplexMatrix phase = (gram.array() * inv2g).unaryExpr([](Scalar v) {
    return std::polar(Scalar(1), v);
  });
  const Vector<Scalar> shrink = (-sq.array() * inv4g).exp().matrix();
  const Matrix<Scalar> shrink_outer = shrink * shrink.transpose();
  const Matrix<Scalar> q_plus = shrink_outer.cwiseProduct((-gram.array() * inv2g).exp().matrix());
  const Matrix<Scalar> q_minus = shrink_outer.cwiseProduct((gram.array() * inv2g).exp().matrix());

  const Index pairs = n * (n + 1) / 2;
  ComplexMatrix rows(pairs, n);
  Vector<Scalar> outer_weight(pairs);
  {
    Index p = 0;
    for (Index j = 0; j < n; ++j) {
      for (Index k = j; k < n; ++k, ++p) {
        rows.row(p) = phase.row(j).cwiseProduct(phase.row(k));
        const Scalar arg = (sq(j) + sq(k) + Scalar(2) * gram(j, k)) * inv4g;
        outer_weight(p) = (j == k ? Scalar(1) : Scalar(2)) * exp(arg);
      }
    }
  }
  const ComplexMatrix plus = rows * q_plus.template cast<Complex>();
  const ComplexMatrix minus = rows * q_minus.template cast<Complex>();

  detail::CompensatedSum<Scalar> four;
  for (Index p = 0; p < pairs; ++p) {
    const Complex inner = plus.row(p).cwiseProduct(rows.row(p)).sum() +
                          minus.row(p).cwiseProduct(rows.row(p).conjugate()).sum();
    four += outer_weight(p) * inner.real();
  }

  detail::CompensatedSum<Scalar> two;
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      two += exp((sq(k) - sq(j)) * inv4g) * cos(gram(j, k) * inv2g);
    }
  }

  const Scalar nn = static_cast<Scalar>(n);
  const Scalar value = four.value() / (Scalar(2) * nn * nn * nn) -
                       Scalar(2) / nn * two.value() + nn;
  return pow(std::numbers::pi_v<Scalar> / gamma, static_cast<Scalar>(res.d()) / Scalar(2)) *
         value;
}

/// Upper tail of the chi-square law with df degrees of freedom.
template <typename Scalar>
Scalar chi_square_upper_tail(Scalar x, Scalar df) {
  if (!(x > Scalar(0))) {
    return Scalar(1);
  }
  return boost::math::gamma_q(df / Scalar(2), x / Scalar(2));
}

/// Degrees of freedom d(d+1)(d+2)/6 of the skewness test's chi-square limit.
inline Index mardia_skew_df(Index d) { return d * (d + 1) * (d + 2) / 6; }

/// Mardia's skewness test: n b_{1,d} / 6 against chi-square with
/// d(d+1)(d+2)/6 degrees of freedom.
template <typename Scalar>
TestOutcome<Scalar> mardia_skew_test(const ResidualSet<Scalar>& res) {
  TestOutcome<Scalar> out;
  out.statistic = static_cast<Scalar>(res.n()) * mardia_skewness(res) / Scalar(6);
  out.p_value = chi_square_upper_tail(out.statistic, static_cast<Scalar>(mardia_skew_df(res.d())));
  return out;
}

/// Variance 8 d (d + 2) of the kurtosis limit law.
inline Index mardia_kurt_variance(Index d) { return 8 * d * (d + 2); }

/// Mardia's kurtosis test: z = sqrt(n) (b_{2,d} - d(d+2)) / sqrt(8 d (d+2)),
/// two-sided normal p-value.
template <typename Scalar>
TestOutcome<Scalar> mardia_kurt_test(const ResidualSet<Scalar>& res) {
  using std::abs;
  using std::erfc;
  using std::sqrt;
  const Scalar dd = static_cast<Scalar>(res.d());
  TestOutcome<Scalar> out;
  out.statistic = sqrt(static_cast<Scalar>(res.n())) *
                  (mardia_kurtosis(res) - dd * (dd + Scalar(2))) /
                  sqrt(static_cast<Scalar>(mardia_kurt_variance(res.d())));
  out.p_value = erfc(abs(out.statistic) / sqrt(Scalar(2)));
  return out;
}

}  // namespace mgfnorm

#endif  // MGFNORM_COMPETITORS_HPP
