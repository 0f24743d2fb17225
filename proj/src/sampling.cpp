#include "mgfnorm/sampling.hpp"

#include <cmath>
#include <sstream>

#include "mgfnorm/errors.hpp"

namespace mgfnorm {

std::mt19937_64 SeededStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view task) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : task) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = base ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix<double> CovarianceShape::matrix(Index d) const {
  switch (kind) {
    case Kind::Identity:
      return Matrix<double>::Identity(d, d);
    case Kind::ScaledIdentity:
      return value * Matrix<double>::Identity(d, d);
    case Kind::Equicorrelated: {
      Matrix<double> m = Matrix<double>::Constant(d, d, value);
      m.diagonal().setOnes();
      return m;
    }
  }
  return Matrix<double>::Identity(d, d);
}

namespace {

double standard_normal(std::mt19937_64& eng) {
  std::normal_distribution<double> z(0.0, 1.0);
  return z(eng);
}

// Uniform on the open interval (0, 1).
double open_uniform(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = 0;
  do {
    x = u(eng);
  } while (x <= 0.0);
  return x;
}

using RowRef = Eigen::Ref<RowVector<double>, 0, Eigen::InnerStride<>>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Matrix<double> cholesky_factor(const Matrix<double>& cov) {
  Eigen::LLT<Matrix<double>> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw InvalidSpec("covariance matrix of a mixture component is not positive definite");
  }
  return llt.matrixL();
}

void fill_gaussian_row(RowRef row, double mean, const Matrix<double>& chol,
                       std::mt19937_64& eng) {
  Vector<double> z(row.size());
  for (Index i = 0; i < z.size(); ++i) z(i) = standard_normal(eng);
  row = (chol * z).transpose().array() + mean;
}

void fill_unit_sphere(RowRef row, std::mt19937_64& eng) {
  double norm = 0;
  do {
    for (Index i = 0; i < row.size(); ++i) row(i) = standard_normal(eng);
    norm = row.norm();
  } while (norm == 0.0);
  row /= norm;
}

}  // namespace

double draw_marginal(const Marginal& marginal, std::mt19937_64& eng) {
  return std::visit(
      Overloaded{
          [&](const ChiSquareLaw& m) { return std::chi_squared_distribution<double>(m.k)(eng); },
          [&](const LogNormalLaw& m) {
            return std::lognormal_distribution<double>(m.mu, m.sigma)(eng);
          },
          [&](const LogisticLaw&) {
            const double u = open_uniform(eng);
            return std::log(u / (1.0 - u));
          },
          [&](const GammaLaw& m) {
            return std::gamma_distribution<double>(m.shape, 1.0 / m.rate)(eng);
          },
          [&](const WeibullLaw& m) { return std::weibull_distribution<double>(m.k, 1.0)(eng); },
          [&](const PearsonVIILaw& m) {
            if (m.convention == PearsonConvention::DegreesOfFreedom) {
              return std::student_t_distribution<double>(m.value)(eng);
            }
            const double nu = 2.0 * m.value - 1.0;
            return std::student_t_distribution<double>(nu)(eng) / std::sqrt(nu);
          },
          [&](const SkewNormalLaw& m) {
            const double delta = m.lambda / std::sqrt(1.0 + m.lambda * m.lambda);
            const double z0 = standard_normal(eng);
            const double z1 = standard_normal(eng);
            return delta * std::abs(z0) + std::sqrt(1.0 - delta * delta) * z1;
          },
          [&](const StudentTLaw& m) { return std::student_t_distribution<double>(m.nu)(eng); },
      },
      marginal);
}

DataMatrix<double> sample(const AlternativeSpec& spec, Index n, const SeededStream& stream) {
  spec.validate();
  const Index d = spec.d;
  if (n < d + 1) {
    std::ostringstream msg;
    msg << "sample: need n >= d + 1, got n = " << n << ", d = " << d;
    throw InvalidSpec(msg.str());
  }
  auto eng = stream.engine();
  Matrix<double> x(n, d);

  std::visit(
      Overloaded{
          [&](const StdNormalFamily&) {
            for (Index i = 0; i < n; ++i)
              for (Index j = 0; j < d; ++j) x(i, j) = standard_normal(eng);
          },
          [&](const NormalMixtureFamily& f) {
            const Matrix<double> l1 = cholesky_factor(f.cov1.matrix(d));
            const Matrix<double> l2 = cholesky_factor(f.cov2.matrix(d));
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (Index i = 0; i < n; ++i) {
              if (u(eng) < f.p) {
                fill_gaussian_row(x.row(i), f.mu1, l1, eng);
              } else {
                fill_gaussian_row(x.row(i), f.mu2, l2, eng);
              }
            }
          },
          [&](const MultivariateTFamily& f) {
            std::chi_squared_distribution<double> chi(f.nu);
            for (Index i = 0; i < n; ++i) {
              for (Index j = 0; j < d; ++j) x(i, j) = standard_normal(eng);
              x.row(i) /= std::sqrt(chi(eng) / f.nu);
            }
          },
          [&](const IidMarginalsFamily& f) {
            for (Index i = 0; i < n; ++i)
              for (Index j = 0; j < d; ++j) x(i, j) = draw_marginal(f.marginal, eng);
          },
          [&](const OneNonNormalMarginalFamily& f) {
            for (Index i = 0; i < n; ++i) {
              for (Index j = 0; j + 1 < d; ++j) x(i, j) = standard_normal(eng);
              x(i, d - 1) = draw_marginal(f.marginal, eng);
            }
          },
          [&](const SphericalLogNormalRadiusFamily& f) {
            std::lognormal_distribution<double> radius(f.mu, f.sigma);
            for (Index i = 0; i < n; ++i) {
              fill_unit_sphere(x.row(i), eng);
              x.row(i) *= radius(eng);
            }
          },
          [&](const NormalMixtureRhoFamily& f) {
            const Matrix<double> lp =
                cholesky_factor(CovarianceShape{CovarianceShape::Kind::Equicorrelated, f.rho}
                                    .matrix(d));
            const Matrix<double> lm =
                cholesky_factor(CovarianceShape{CovarianceShape::Kind::Equicorrelated, -f.rho}
                                    .matrix(d));
            std::bernoulli_distribution coin(0.5);
            for (Index i = 0; i < n; ++i) {
              fill_gaussian_row(x.row(i), 0.0, coin(eng) ? lp : lm, eng);
            }
          },
      },
      spec.family);
  return DataMatrix<double>(std::move(x));
}

Vector<double> sample_skew_normal(double lambda, Index n, const SeededStream& stream) {
  auto eng = stream.engine();
  const Marginal law = SkewNormalLaw{lambda};
  Vector<double> out(n);
  for (Index i = 0; i < n; ++i) out(i) = draw_marginal(law, eng);
  return out;
}

DataMatrix<double> sample_spherical_lognormal(Index d, double mu, double sigma, Index n,
                                              const SeededStream& stream) {
  AlternativeSpec spec{SphericalLogNormalRadiusFamily{mu, sigma}, d};
  return sample(spec, n, stream);
}

Vector<double> sample_pearson_vii(double m, Index n, const SeededStream& stream) {
  if (!(m > 0.5) || !std::isfinite(m)) {
    throw InvalidSpec("sample_pearson_vii: shape m must exceed 1/2");
  }
  auto eng = stream.engine();
  const Marginal law = PearsonVIILaw{m, PearsonConvention::Shape};
  Vector<double> out(n);
  for (Index i = 0; i < n; ++i) out(i) = draw_marginal(law, eng);
  return out;
}

}  // namespace mgfnorm
