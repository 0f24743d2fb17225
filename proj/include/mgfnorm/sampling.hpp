#ifndef MGFNORM_SAMPLING_HPP
#define MGFNORM_SAMPLING_HPP

// Seeded generators for the null law and every alternative used in the
// power study. A sample is a pure function of (spec, n, seed, stream_index).

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "mgfnorm/linalg.hpp"

namespace mgfnorm {

/// Reproducible random stream. The engine is std::mt19937_64 seeded through
/// std::seed_seq from the four 32-bit halves of (seed, stream_index); distinct
/// stream indices give independent streams for practical purposes.
struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;

  static constexpr std::string_view algorithm = "mt19937_64/seed_seq(seed,stream_index)";

  std::mt19937_64 engine() const;
};

/// Mixes a base seed with a task name (FNV-1a then splitmix64 finalizer) so
/// that unrelated Monte Carlo tasks draw from unrelated streams.
std::uint64_t derive_seed(std::uint64_t base, std::string_view task);

// ---------------------------------------------------------------------------
// Univariate marginal laws.

struct ChiSquareLaw {
  double k = 1;
};
struct LogNormalLaw {
  double mu = 0;
  double sigma = 1;
};
struct LogisticLaw {};
/// Gamma with shape and rate. Scale conventions only rescale the law, which
/// every affine invariant statistic ignores.
struct GammaLaw {
  double shape = 1;
  double rate = 1;
};
struct WeibullLaw {
  double k = 1;
};

enum class PearsonConvention {
  /// Student t with `value` degrees of freedom, unit scale (the convention of
  /// the R package PearsonDS, whose rpearsonVII(df) is scale * rt(df)).
  DegreesOfFreedom,
  /// Density proportional to (1 + x^2)^{-m}, m = `value`: t_{2m-1}/sqrt(2m-1).
  Shape,
};

struct PearsonVIILaw {
  double value = 10;
  PearsonConvention convention = PearsonConvention::DegreesOfFreedom;
};
struct SkewNormalLaw {
  double lambda = 0;
};
struct StudentTLaw {
  double nu = 1;
};

using Marginal = std::variant<ChiSquareLaw, LogNormalLaw, LogisticLaw, GammaLaw, WeibullLaw,
                              PearsonVIILaw, SkewNormalLaw, StudentTLaw>;

// ---------------------------------------------------------------------------
// Multivariate families.

/// Covariance of a mixture component: identity, c * I, or the equicorrelation
/// matrix with unit diagonal and constant off-diagonal entry r.
struct CovarianceShape {
  enum class Kind { Identity, ScaledIdentity, Equicorrelated };
  Kind kind = Kind::Identity;
  double value = 1;

  Matrix<double> matrix(Index d) const;
  friend bool operator==(const CovarianceShape&, const CovarianceShape&) = default;
};

struct StdNormalFamily {};
/// p N_d(mu1 1, Sigma1) + (1 - p) N_d(mu2 1, Sigma2).
struct NormalMixtureFamily {
  double p = 0.5;
  double mu1 = 0;
  CovarianceShape cov1;
  double mu2 = 0;
  CovarianceShape cov2;
};
struct MultivariateTFamily {
  double nu = 5;
};
struct IidMarginalsFamily {
  Marginal marginal;
};
/// d - 1 independent N(0,1) coordinates followed by one non-normal coordinate.
struct OneNonNormalMarginalFamily {
  Marginal marginal;
};
/// R U with R ~ LogNormal(mu, sigma) and U uniform on the unit sphere.
struct SphericalLogNormalRadiusFamily {
  double mu = 0;
  double sigma = 0.5;
};
/// 0.5 N_d(0, rho_d) + 0.5 N_d(0, rho_d'), equicorrelation +rho and -rho:
/// every marginal is N(0,1), the joint law is not normal.
struct NormalMixtureRhoFamily {
  double rho = 0.2;
};

using Family = std::variant<StdNormalFamily, NormalMixtureFamily, MultivariateTFamily,
                            IidMarginalsFamily, OneNonNormalMarginalFamily,
                            SphericalLogNormalRadiusFamily, NormalMixtureRhoFamily>;

/// A sampling distribution and its dimension.
///
/// Canonical string form, used by the CLI and in result files:
///   normal:d=2
///   nmix1:d=3 | nmix2:d=3 | nmix:p=0.5,mu1=0,cov1=I,mu2=0,cov2=4I,d=1
///   mvt:nu=5,d=2
///   chisq:k=15,d=2,iid   (marginal families, suffix iid or one)
///   pearson7:df=10,d=1,iid   or   pearson7:m=10,d=1,iid
///   spherical_lognormal:mu=0,sigma=0.5,d=3
///   nmrho:rho=0.2,d=5
/// Covariance shapes: I, <c>I, B<r>.
struct AlternativeSpec {
  Family family;
  Index d = 1;

  /// Throws InvalidSpec when a parameter is outside its family's domain.
  void validate() const;
  /// False for families without finite exponential moments of every order
  /// that the consistency machinery refuses (t and Pearson VII laws).
  bool allows_consistency_curve() const;

  std::string to_string() const;
  static AlternativeSpec parse(std::string_view text);

  static AlternativeSpec std_normal(Index d);
  /// 0.9 N_d(0, I) + 0.1 N_d(3, I).
  static AlternativeSpec nmix1(Index d);
  /// 0.9 N_d(0, B_d) + 0.1 N_d(0, I), B_d equicorrelated with r = 0.9.
  static AlternativeSpec nmix2(Index d);
  static AlternativeSpec iid(Marginal m, Index d);
  static AlternativeSpec one_non_normal(Marginal m, Index d);
};

bool operator==(const AlternativeSpec& a, const AlternativeSpec& b);

/// n i.i.d. draws from `spec`. Requires n >= d + 1.
DataMatrix<double> sample(const AlternativeSpec& spec, Index n, const SeededStream& stream);

/// Draws one value of a marginal law.
double draw_marginal(const Marginal& marginal, std::mt19937_64& engine);

/// SN(lambda) via delta |Z0| + sqrt(1 - delta^2) Z1, delta = lambda / sqrt(1 + lambda^2).
Vector<double> sample_skew_normal(double lambda, Index n, const SeededStream& stream);

DataMatrix<double> sample_spherical_lognormal(Index d, double mu, double sigma, Index n,
                                              const SeededStream& stream);

/// Pearson VII with density proportional to (1 + x^2)^{-m}; requires m > 1/2.
Vector<double> sample_pearson_vii(double m, Index n, const SeededStream& stream);

}  // namespace mgfnorm

#endif  // MGFNORM_SAMPLING_HPP
