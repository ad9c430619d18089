#pragma once

#include "translin/types.hpp"

#include <Eigen/SVD>

#include <string>
#include <utility>

namespace translin {

/// Relative singular-value cutoff for all pseudo-inverse applications,
/// measured against the largest singular value.
inline constexpr double kRankTolerance = 1e-10;

template <class Scalar>
struct ProjectionParts {
  VectorX<Scalar> proj;   // component in the column space of A
  VectorX<Scalar> resid;  // orthogonal remainder, proj + resid = v
};

/// Thin SVD of one design matrix, reusable across the pseudo-inverse
/// applications that share it. Construction fails loudly when the smallest
/// singular value falls below the relative cutoff; Gaussian designs are full
/// rank almost surely, so that signals a caller error rather than something
/// to regularize away.
template <class Scalar>
class DesignSvd {
 public:
  /// Computes the thin factors from an eigendecomposition of the smaller
  /// Gram matrix (n x n for tall designs, d x d for wide ones); the larger
  /// Gram is never formed.
  DesignSvd(const MatrixX<Scalar>& a, const std::string& context)
      : rows_(a.rows()), cols_(a.cols()) {
    const Index k = std::min(rows_, cols_);
    if (k == 0) throw SingularMatrixError(context + ": empty matrix");
    const bool tall = rows_ >= cols_;
    const MatrixX<Scalar> gram = tall ? MatrixX<Scalar>(a.transpose() * a)
                                      : MatrixX<Scalar>(a * a.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eigen(gram);
    if (eigen.info() != Eigen::Success)
      throw SingularMatrixError(context + ": eigensolver failed");
    // Eigenvalues arrive ascending; flip into the conventional descending
    // singular-value order.
    sigma_ = eigen.eigenvalues().reverse().cwiseMax(Scalar(0)).cwiseSqrt();
    const Scalar cutoff = static_cast<Scalar>(kRankTolerance) * sigma_[0];
    if (!(sigma_[k - 1] > cutoff)) {
      throw SingularMatrixError(context + ": rank-deficient " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " matrix, singular value " +
                                std::to_string(static_cast<double>(sigma_[k - 1])) +
                                " below cutoff at dimension " + std::to_string(k - 1));
    }
    const MatrixX<Scalar> gram_basis = eigen.eigenvectors().rowwise().reverse();
    if (tall) {
      v_ = gram_basis;
      u_ = a * (v_ * sigma_.cwiseInverse().asDiagonal());
    } else {
      u_ = gram_basis;
      v_ = a.transpose() * (u_ * sigma_.cwiseInverse().asDiagonal());
    }
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  /// Descending singular values.
  const VectorX<Scalar>& singular_values() const { return sigma_; }

  /// U S^{-1} V^T y: equals A (A^T A)^{-1} y when A is tall and
  /// (A A^T)^{-1} A y when A is wide.
  VectorX<Scalar> pseudo_solve(const VectorX<Scalar>& y) const {
    return u_ * (sigma_.cwiseInverse().asDiagonal() * (v_.transpose() * y));
  }

  /// Orthogonal split of v against the column space of A (tall A).
  ProjectionParts<Scalar> split(const VectorX<Scalar>& v) const {
    VectorX<Scalar> proj = u_ * (u_.transpose() * v);
    return {proj, v - proj};
  }

 private:
  Index rows_ = 0, cols_ = 0;
  MatrixX<Scalar> u_;      // rows x k
  MatrixX<Scalar> v_;      // cols x k
  VectorX<Scalar> sigma_;  // k = min(rows, cols)
};

/// Minimum-l2-norm solution a = A (A^T A)^{-1} y of the interpolation
/// constraints A^T a = y, for a tall A (d x n with d > n, full column rank).
/// This is the convergence point of GD/SGD started from zero.
template <class Scalar>
VectorX<Scalar> min_norm_fit(const MatrixX<Scalar>& a, const VectorX<Scalar>& y) {
  if (a.cols() != y.size())
    throw std::invalid_argument("min_norm_fit: A has " + std::to_string(a.cols()) +
                                " columns but y has " + std::to_string(y.size()) + " entries");
  if (a.rows() < a.cols())
    throw std::invalid_argument("min_norm_fit: expected d >= n, got " + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()));
  return DesignSvd<Scalar>(a, "min_norm_fit").pseudo_solve(y);
}

/// Minimum-l2-norm change from an initial point: the convergence point of
/// GD/SGD started at a0, i.e. a0 + A (A^T A)^{-1} (y - A^T a0).
template <class Scalar>
VectorX<Scalar> min_norm_fit_from_init(const MatrixX<Scalar>& a, const VectorX<Scalar>& y,
                                       const VectorX<Scalar>& a0) {
  if (a0.size() != a.rows())
    throw std::invalid_argument("min_norm_fit_from_init: init has " + std::to_string(a0.size()) +
                                " entries but A has " + std::to_string(a.rows()) + " rows");
  return a0 + min_norm_fit<Scalar>(a, y - a.transpose() * a0);
}

/// Unique least-squares minimizer (A A^T)^{-1} A y of ||A^T a - y|| for a
/// wide A (d x n with n >= d, full row rank).
template <class Scalar>
VectorX<Scalar> least_squares_fit(const MatrixX<Scalar>& a, const VectorX<Scalar>& y) {
  if (a.cols() != y.size())
    throw std::invalid_argument("least_squares_fit: A has " + std::to_string(a.cols()) +
                                " columns but y has " + std::to_string(y.size()) + " entries");
  if (a.rows() > a.cols())
    throw std::invalid_argument("least_squares_fit: expected n >= d, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  if (a.rows() == 0) return VectorX<Scalar>(0);
  return DesignSvd<Scalar>(a, "least_squares_fit").pseudo_solve(y);
}

/// Orthogonal split of v against the column space of a tall full-rank A.
template <class Scalar>
ProjectionParts<Scalar> projection_residual(const MatrixX<Scalar>& a, const VectorX<Scalar>& v) {
  if (v.size() != a.rows())
    throw std::invalid_argument("projection_residual: v has " + std::to_string(v.size()) +
                                " entries but A has " + std::to_string(a.rows()) + " rows");
  if (a.rows() <= a.cols())
    throw std::invalid_argument("projection_residual: expected d > n, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  return DesignSvd<Scalar>(a, "projection_residual").split(v);
}

}  // namespace translin
