#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "copath/error.hpp"

namespace copath {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Relative pivot tolerance below which a matrix is declared not
/// positive-definite.
inline constexpr double kPivotTolerance = 1e-12;

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::Scalar tol = 1e-12) {
  using std::abs;
  if (m.rows() != m.cols()) return false;
  const auto scale = std::max<typename Derived::Scalar>(1, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (abs(m(i, j) - m(j, i)) > tol * scale) return false;
  return true;
}

/// Lower-triangular Cholesky factor L with L * L^T == m.
///
/// Throws Errc::NotPositiveDefinite when a pivot falls to or below
/// kPivotTolerance times the largest diagonal entry.
template <typename Derived>
Matrix<typename Derived::Scalar> cholesky(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(Errc::DimensionMismatch, "cholesky: matrix must be square and non-empty");
  if (!m.allFinite()) fail(Errc::Domain, "cholesky: non-finite entry");
  if (!is_symmetric(m)) fail(Errc::Domain, "cholesky: matrix is not symmetric");

  const Eigen::Index n = m.rows();
  const Scalar max_diag = m.diagonal().maxCoeff();
  if (!(max_diag > 0)) fail(Errc::NotPositiveDefinite, "cholesky: nonpositive diagonal");
  const Scalar threshold = Scalar(kPivotTolerance) * max_diag;

  Matrix<Scalar> l = Matrix<Scalar>::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Scalar pivot = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > threshold))
      fail(Errc::NotPositiveDefinite,
           "cholesky: pivot " + std::to_string(static_cast<double>(pivot)) +
               " at index " + std::to_string(j));
    l(j, j) = sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i)
      l(i, j) = (m(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  return l;
}

template <typename Derived>
bool is_positive_definite(const Eigen::MatrixBase<Derived>& m) {
  try {
    cholesky(m);
    return true;
  } catch (const Error&) {
    return false;
  }
}

/// Solves m * x = rhs for symmetric positive-definite m via its Cholesky factor.
template <typename DerivedM, typename DerivedV>
Vector<typename DerivedM::Scalar> solve_spd(const Eigen::MatrixBase<DerivedM>& m,
                                            const Eigen::MatrixBase<DerivedV>& rhs) {
  if (rhs.size() != m.rows())
    fail(Errc::DimensionMismatch, "solve_spd: rhs length does not match matrix dimension");
  const auto l = cholesky(m);
  Vector<typename DerivedM::Scalar> y = l.template triangularView<Eigen::Lower>().solve(rhs);
  return l.transpose().template triangularView<Eigen::Upper>().solve(y);
}

}  // namespace copath
