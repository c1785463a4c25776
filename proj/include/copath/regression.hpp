#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "copath/copula.hpp"
#include "copath/dataset.hpp"
#include "copath/linalg.hpp"

namespace copath {

enum class MethodKind { Classical, GaussianCopula, TCopula };

struct Method {
  MethodKind kind = MethodKind::Classical;
  double nu = 0.0;  // TCopula only

  static Method classical() { return {MethodKind::Classical, 0.0}; }
  static Method gaussian_copula() { return {MethodKind::GaussianCopula, 0.0}; }
  static Method t_copula(double nu) { return {MethodKind::TCopula, nu}; }

  friend bool operator==(const Method&, const Method&) = default;
};

/// Stable identifier: "classical", "gaussian_copula" or "t_copula".
std::string method_name(const Method& m);
/// Inverse of method_name; also accepts "gaussian" and "t". Throws Errc::InvalidArgument.
Method parse_method(const std::string& name, double nu = 4.0);

struct PathCoefficients {
  VectorXd values;
  double intercept = 0.0;
  Method method;
};

enum class McMode {
  Auto,        // closed form whenever the Y-side transform is affine
  MonteCarlo,  // always average over draws
};

struct McSettings {
  std::size_t n_draws = 20000;
  std::uint64_t seed = 0;
  McMode mode = McMode::Auto;
};

enum class MarginalFit { Normal, Empirical };

/// Fitted structural regression. Immutable once built.
struct RegressionModel {
  Method method;
  std::string endogenous;
  std::vector<std::string> exogenous;
  PathCoefficients coefficients;
  /// Y first, then each exogenous variable. Empty for the classical method.
  std::vector<MarginalModel> marginals;
  /// Copula correlation over (Y, X); absent for the classical method.
  std::optional<CorrelationMatrix> sigma_hat;
  McSettings mc;
  /// Standard normal (Gaussian) or t_{nu+p} (t copula) draws shared by every
  /// prediction from this model.
  std::shared_ptr<const std::vector<double>> draws;

  Eigen::Index p() const { return static_cast<Eigen::Index>(exogenous.size()); }
  CopulaFamily family() const;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Least squares without intercept of `endogenous` on `exogenous`.
/// Throws Errc::SingularDesign when the Gram matrix is not positive-definite.
PathCoefficients ols_fit(const Dataset& data, const std::string& endogenous,
                         const std::vector<std::string>& exogenous);

/// P = Sigma_X^{-1} rho.
PathCoefficients gaussian_closed_form(const VectorXd& rho, const CorrelationMatrix& sigma_x);

/// Builds a copula regression model from known parameters. Variable 0 of
/// `sigma` and `marginals` is Y.
RegressionModel make_copula_model(const CopulaFamily& family, const CorrelationMatrix& sigma,
                                  std::vector<MarginalModel> marginals, McSettings mc = {},
                                  std::vector<std::string> names = {});

RegressionModel fit_classical(const Dataset& data, const std::string& endogenous,
                              const std::vector<std::string>& exogenous);

/// Fits marginals per column, then Sigma-hat as the Pearson correlation of
/// the latent scores.
RegressionModel fit_copula(const Dataset& data, const std::string& endogenous,
                           const std::vector<std::string>& exogenous, const CopulaFamily& family,
                           MarginalFit marginal_fit = MarginalFit::Normal, McSettings mc = {});

RegressionModel fit(const Method& method, const Dataset& data, const std::string& endogenous,
                    const std::vector<std::string>& exogenous,
                    MarginalFit marginal_fit = MarginalFit::Normal, McSettings mc = {});

/// Conditional mean of Y given X = x under a Gaussian copula model, averaged
/// over the model's draws.
McEstimate gaussian_copula_regression_mc(const VectorXd& x, const RegressionModel& model);

/// Conditional mean of Y given X = x under a t copula model (nu > 1).
McEstimate t_copula_regression_mc(const VectorXd& x, const RegressionModel& model);

/// Common-correlation t copula with identical t marginals at location mu:
/// m = (1 - rho)/(1 + rho) mu + rho/(1 + rho) (x1 + x2).
double t_common_rho_closed_form(const VectorXd& x, double rho, double mu);

/// Point prediction for one covariate vector, using the closed form when the
/// model allows it.
double conditional_mean(const VectorXd& x, const RegressionModel& model);

/// Fitted values for every row of `data`. Throws Errc::SchemaMismatch when an
/// exogenous column is missing.
VectorXd predict(const RegressionModel& model, const Dataset& data);

/// rho' Sigma_X^{-1} rho for the model's correlation; must not exceed 1.
double explained_fraction(const RegressionModel& model);

}  // namespace copath
