#ifndef MGFNORM_LINALG_HPP
#define MGFNORM_LINALG_HPP

// Sample moments, the symmetric inverse square root and the scaled-residual
// transform. Every statistic in the library consumes a ResidualSet, and only
// through squared norms and Gram products, which is what makes the whole
// battery affine invariant.

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>

#include "mgfnorm/errors.hpp"

namespace mgfnorm {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Raw sample: one observation per row, one coordinate per column.
///
/// Invariants checked on construction: n >= d + 1 and every entry finite.
template <typename Scalar>
class DataMatrix {
 public:
  explicit DataMatrix(Matrix<Scalar> values) : values_(std::move(values)) {
    if (values_.cols() < 1) {
      throw InvalidData("DataMatrix: dimension d must be positive");
    }
    if (values_.rows() < values_.cols() + 1) {
      std::ostringstream msg;
      msg << "DataMatrix: need n >= d + 1 observations, got n = " << values_.rows()
          << ", d = " << values_.cols();
      throw InvalidData(msg.str());
    }
    for (Index i = 0; i < values_.rows(); ++i) {
      for (Index j = 0; j < values_.cols(); ++j) {
        if (!std::isfinite(static_cast<double>(values_(i, j)))) {
          std::ostringstream msg;
          msg << "DataMatrix: non-finite entry at row " << i << ", column " << j;
          throw InvalidData(msg.str());
        }
      }
    }
  }

  Index n() const { return values_.rows(); }
  Index d() const { return values_.cols(); }
  const Matrix<Scalar>& values() const { return values_; }

 private:
  Matrix<Scalar> values_;
};

/// Scaled residuals Y_j = S^{-1/2} (X_j - mean) with cached squared norms.
///
/// Immutable after construction. The n x n Gram matrix Y Y^T is built on
/// first request and shared between copies; concurrent first access computes
/// it exactly once. Memory cost of the Gram matrix is O(n^2).
template <typename Scalar>
class ResidualSet {
 public:
  /// Wraps precomputed residual rows. No mean-zero / unit-covariance check is
  /// made here; use scaled_residuals() to obtain a set with those guarantees.
  explicit ResidualSet(Matrix<Scalar> residuals)
      : state_(std::make_shared<State>(std::move(residuals))) {}

  Index n() const { return state_->residuals.rows(); }
  Index d() const { return state_->residuals.cols(); }

  const Matrix<Scalar>& residuals() const { return state_->residuals; }
  const Vector<Scalar>& sq_norms() const { return state_->sq_norms; }

  const Matrix<Scalar>& gram() const {
    std::call_once(state_->gram_once, [s = state_.get()] {
      s->gram.noalias() = s->residuals * s->residuals.transpose();
      s->gram.template triangularView<Eigen::StrictlyUpper>() =
          s->gram.transpose().template triangularView<Eigen::StrictlyUpper>();
      // Exact symmetry and a diagonal that agrees with sq_norms bit-for-bit.
      s->gram.diagonal() = s->sq_norms;
    });
    return state_->gram;
  }

 private:
  struct State {
    explicit State(Matrix<Scalar> r)
        : residuals(std::move(r)), sq_norms(residuals.rowwise().squaredNorm()) {
      gram.setZero(0, 0);
    }
    Matrix<Scalar> residuals;
    Vector<Scalar> sq_norms;
    std::once_flag gram_once;
    Matrix<Scalar> gram;
  };
  std::shared_ptr<State> state_;
};

template <typename Scalar>
Vector<Scalar> sample_mean(const DataMatrix<Scalar>& data) {
  return data.values().colwise().mean().transpose();
}

/// Sample covariance with divisor n (not n - 1). Every statistic depends on
/// this convention.
template <typename Scalar>
Matrix<Scalar> sample_covariance(const DataMatrix<Scalar>& data) {
  const Matrix<Scalar> centered =
      data.values().rowwise() - sample_mean(data).transpose();
  Matrix<Scalar> cov = (centered.transpose() * centered) / static_cast<Scalar>(data.n());
  return (cov + cov.transpose()) / Scalar(2);
}

/// Relative eigenvalue floor below which a covariance matrix is singular.
template <typename Scalar>
constexpr Scalar singularity_tolerance() {
  return Scalar(1e-12);
}

/// Unique symmetric positive-definite R with R * R = S^{-1}, computed as
/// Q diag(lambda^{-1/2}) Q^T from the symmetric eigendecomposition of S.
///
/// Throws SingularCovariance when the smallest eigenvalue is not above
/// 1e-12 times the largest one.
template <typename Derived>
Matrix<typename Derived::Scalar> inv_sqrt_sym(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  if (s.rows() != s.cols()) {
    throw DimensionMismatch("inv_sqrt_sym: matrix is not square");
  }
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(s.derived());
  if (eig.info() != Eigen::Success) {
    throw SingularCovariance("inv_sqrt_sym: eigendecomposition failed");
  }
  const Vector<Scalar>& lambda = eig.eigenvalues();
  const Scalar largest = lambda.maxCoeff();
  const Scalar smallest = lambda.minCoeff();
  if (!(largest > Scalar(0)) || smallest <= singularity_tolerance<Scalar>() * largest) {
    std::ostringstream msg;
    msg << "covariance matrix is singular (eigenvalues in [" << smallest << ", " << largest
        << "]); need more observations or non-collinear data";
    throw SingularCovariance(msg.str());
  }
  const Matrix<Scalar>& q = eig.eigenvectors();
  Matrix<Scalar> r = q * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
  return (r + r.transpose()) / Scalar(2);
}

template <typename Scalar>
ResidualSet<Scalar> scaled_residuals(const DataMatrix<Scalar>& data) {
  const Matrix<Scalar> root = inv_sqrt_sym(sample_covariance(data));
  // Rows are observations, so Y = (X - 1 mean^T) R with R symmetric.
  Matrix<Scalar> y = (data.values().rowwise() - sample_mean(data).transpose()) * root;
  return ResidualSet<Scalar>(std::move(y));
}

}  // namespace mgfnorm

#endif  // MGFNORM_LINALG_HPP
