#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "copath/dataset.hpp"
#include "copath/linalg.hpp"

namespace copath {

/// Symmetric, unit-diagonal, positive-definite matrix. Construction validates
/// and keeps the Cholesky factor.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(const MatrixXd& m);
  static CorrelationMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const MatrixXd& matrix() const { return m_; }
  const MatrixXd& cholesky_factor() const { return l_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  MatrixXd m_;
  MatrixXd l_;
};

struct StandardNormalMarginal {};

struct NormalMarginal {
  double mean = 0.0;
  double sd = 1.0;
};

struct StudentTMarginal {
  double nu = 1.0;
  double location = 0.0;
  double scale = 1.0;
};

class EmpiricalMarginal {
 public:
  explicit EmpiricalMarginal(std::vector<double> sample);
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

using MarginalModel =
    std::variant<StandardNormalMarginal, NormalMarginal, StudentTMarginal, EmpiricalMarginal>;

/// Throws Errc::Domain when parameters violate the marginal's invariants.
void validate(const MarginalModel& m);

double marginal_cdf(const MarginalModel& m, double x);
/// Type-7 interpolated order statistic for empirical marginals.
double marginal_quantile(const MarginalModel& m, double p);
double marginal_mean(const MarginalModel& m);

struct GaussianFamily {};
struct StudentTFamily {
  double nu = 4.0;
};
using CopulaFamily = std::variant<GaussianFamily, StudentTFamily>;

std::string family_name(const CopulaFamily& family);

/// Elliptical copula over (Y, X1..Xp); index 0 is always Y.
struct CopulaSpec {
  CopulaSpec(CopulaFamily family, CorrelationMatrix sigma, std::vector<MarginalModel> marginals,
             std::vector<std::string> names = {});

  CopulaFamily family;
  CorrelationMatrix sigma;
  std::vector<MarginalModel> marginals;
  std::vector<std::string> names;

  Eigen::Index p() const { return sigma.dim() - 1; }
};

/// Default variable names: y, x1, ..., xp.
std::vector<std::string> default_names(Eigen::Index p);

struct CorrelationPartition {
  VectorXd rho;
  CorrelationMatrix sigma_x;
};

/// Splits Sigma into rho (correlations of Y with each X) and Sigma_X.
CorrelationPartition partition(const CorrelationMatrix& sigma);
inline CorrelationPartition partition(const CopulaSpec& spec) { return partition(spec.sigma); }

/// Draws n i.i.d. rows: latent elliptical vector via Cholesky, elliptical CDF
/// to uniforms, inverse marginal CDF to the data scale.
Dataset sample(const CopulaSpec& spec, Eigen::Index n, std::uint64_t seed);

/// Gaussian copula density at u (each u_i in (0, 1)).
double gaussian_copula_density(const VectorXd& u, const CorrelationMatrix& sigma);

/// Clamp range applied to probabilities ahead of quantile transforms.
inline constexpr double kProbabilityClamp = 1e-12;
double clamp_probability(double p);

}  // namespace copath
