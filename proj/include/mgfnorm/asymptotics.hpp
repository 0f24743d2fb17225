#ifndef MGFNORM_ASYMPTOTICS_HPP
#define MGFNORM_ASYMPTOTICS_HPP

// Closed-form facts about the limit null distribution of T_{n,gamma}:
// the covariance kernel of the limiting Gaussian element, the mean of
// T_{infinity,gamma} in any dimension and its variance for d = 1.

#include <cmath>
#include <numbers>
#include <sstream>

#include "mgfnorm/errors.hpp"
#include "mgfnorm/linalg.hpp"

namespace mgfnorm {

/// K(s,t) = e^{(|s|^2+|t|^2)/2} ( e^{s.t} (t s^T + I) - t s^T - (1 + s.t) I ).
template <typename DerivedS, typename DerivedT>
Matrix<typename DerivedS::Scalar> kernel(const Eigen::MatrixBase<DerivedS>& s,
                                         const Eigen::MatrixBase<DerivedT>& t, Index d) {
  using Scalar = typename DerivedS::Scalar;
  using std::exp;
  if (s.size() != d || t.size() != d) {
    std::ostringstream msg;
    msg << "kernel: expected vectors of length " << d << ", got " << s.size() << " and "
        << t.size();
    throw DimensionMismatch(msg.str());
  }
  const Scalar st = s.dot(t);
  const Matrix<Scalar> outer = t * s.transpose();
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(d, d);
  return exp((s.squaredNorm() + t.squaredNorm()) / Scalar(2)) *
         (exp(st) * (outer + eye) - outer - (Scalar(1) + st) * eye);
}

/// E[T_{infinity,gamma}] =
///   (pi/(gamma-2))^{d/2} (d + d/(2(gamma-2)))
///   - (d(d+1)/(2(gamma-1)) + d) (pi/(gamma-1))^{d/2}.
template <typename Scalar>
Scalar limit_mean(Scalar gamma, Index d) {
  using std::pow;
  if (!(gamma > Scalar(2))) {
    throw GammaTooSmall("limit_mean: the mean is finite only for gamma > 2");
  }
  if (d < 1) {
    throw DimensionMismatch("limit_mean: d must be positive");
  }
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar dd = static_cast<Scalar>(d);
  const Scalar g2 = gamma - Scalar(2);
  const Scalar g1 = gamma - Scalar(1);
  return pow(pi / g2, dd / Scalar(2)) * (dd + dd / (Scalar(2) * g2)) -
         (dd * (dd + Scalar(1)) / (Scalar(2) * g1) + dd) * pow(pi / g1, dd / Scalar(2));
}

/// Var[T_{infinity,gamma}] for d = 1, with beta = gamma - 1,
/// delta = (beta^2 - 1)^{-1/2}, eta = (4 beta^2 - 1)^{-1/2}:
///   2 pi (1/beta + 1/beta^3 + delta + delta^3 + (beta^2 + 2) delta^5 / 4
///         - 4 eta - 12 eta^3 - 16 (2 beta^2 + 1) eta^5).
template <typename Scalar>
Scalar limit_variance_d1(Scalar gamma) {
  using std::pow;
  using std::sqrt;
  if (!(gamma > Scalar(2))) {
    throw GammaTooSmall("limit_variance_d1: the variance is finite only for gamma > 2");
  }
  const Scalar beta = gamma - Scalar(1);
  const Scalar b2 = beta * beta;
  const Scalar delta = Scalar(1) / sqrt(b2 - Scalar(1));
  const Scalar eta = Scalar(1) / sqrt(Scalar(4) * b2 - Scalar(1));
  const Scalar bracket = Scalar(1) / beta + pow(beta, -3) + delta + pow(delta, 3) +
                         (b2 + Scalar(2)) * pow(delta, 5) / Scalar(4) - Scalar(4) * eta -
                         Scalar(12) * pow(eta, 3) -
                         Scalar(16) * (Scalar(2) * b2 + Scalar(1)) * pow(eta, 5);
  return Scalar(2) * std::numbers::pi_v<Scalar> * bracket;
}

}  // namespace mgfnorm

#endif  // MGFNORM_ASYMPTOTICS_HPP
