#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "copath/dataset.hpp"
#include "copath/linalg.hpp"

namespace copath {

template <typename Derived>
typename Derived::Scalar sample_mean(const Eigen::MatrixBase<Derived>& v) {
  return v.mean();
}

/// Sample standard deviation with divisor n - 1.
template <typename Derived>
typename Derived::Scalar sample_sd(const Eigen::MatrixBase<Derived>& v) {
  using std::sqrt;
  const auto n = v.size();
  if (n < 2) return typename Derived::Scalar(0);
  const auto centered = (v.array() - v.mean());
  return sqrt(centered.square().sum() / typename Derived::Scalar(n - 1));
}

namespace detail {
template <typename Derived>
bool is_degenerate(const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar sd) {
  using Scalar = typename Derived::Scalar;
  const Scalar scale = std::max<Scalar>(v.cwiseAbs().maxCoeff(), Scalar(1e-300));
  return !(sd > Scalar(1e-13) * scale);
}
}  // namespace detail

/// (x - mean) / sd with the n - 1 divisor. Throws Errc::DegenerateColumn for
/// constant or too-short input.
template <typename Derived>
Vector<typename Derived::Scalar> standardize(const Eigen::MatrixBase<Derived>& column) {
  if (column.size() < 2) fail(Errc::DegenerateColumn, "standardize: need at least two values");
  const auto sd = sample_sd(column);
  if (detail::is_degenerate(column, sd))
    fail(Errc::DegenerateColumn, "standardize: column has zero variance");
  return ((column.array() - column.mean()) / sd).matrix();
}

/// Product-moment correlation between the columns of `data`. Symmetric with
/// an exact unit diagonal; not guaranteed positive-definite.
template <typename Derived>
Matrix<typename Derived::Scalar> pearson_correlation(const Eigen::MatrixBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  if (data.rows() < 2) fail(Errc::TooFewObservations, "pearson_correlation: need at least two rows");
  Matrix<Scalar> centered = data.rowwise() - data.colwise().mean();
  Vector<Scalar> norms(data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    norms(j) = centered.col(j).norm();
    if (detail::is_degenerate(data.col(j), norms(j) / sqrt(Scalar(data.rows() - 1))))
      fail(Errc::DegenerateColumn, "pearson_correlation: column " + std::to_string(j) +
                                       " has zero variance");
  }
  Matrix<Scalar> r = centered.transpose() * centered;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      Scalar v = r(i, j) / (norms(i) * norms(j));
      v = std::clamp(v, Scalar(-1), Scalar(1));
      r(i, j) = v;
      r(j, i) = v;
    }
    r(i, i) = Scalar(1);
  }
  return r;
}

MatrixXd pearson_correlation(const Dataset& data);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Survival function of the asymptotic Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// One-sample Kolmogorov-Smirnov test against N(0, 1). Needs n >= 8; the
/// p-value uses the asymptotic distribution with Stephens' small-n scaling.
KsResult ks_test_normal(std::span<const double> sample);

template <typename Derived>
KsResult ks_test_normal(const Eigen::MatrixBase<Derived>& sample) {
  const VectorXd v = sample.template cast<double>();
  return ks_test_normal(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

}  // namespace copath
