#pragma once

#include <string>
#include <vector>

#include "copath/copula.hpp"
#include "copath/linalg.hpp"
#include "copath/regression.hpp"

namespace copath {

struct VariableEffect {
  std::string name;
  double direct = 0.0;
  double indirect = 0.0;  // sum over j != i of rho_{x_i x_j} P_j
  double total = 0.0;     // direct + indirect
  /// Per-mediator contributions rho_{x_i x_j} P_j; zero at j == i.
  std::vector<double> via;
};

struct EffectDecomposition {
  std::vector<VariableEffect> effects;
  /// Correlations of each exogenous variable with Y used alongside the decomposition.
  VectorXd rho;
};

/// Splits each correlation-system row into the direct path coefficient and
/// the indirect contributions routed through the other exogenous variables.
EffectDecomposition decompose(const VectorXd& coefficients, const MatrixXd& sigma_x,
                              const VectorXd& rho, std::vector<std::string> names = {});

inline EffectDecomposition decompose(const PathCoefficients& p, const CorrelationMatrix& sigma_x,
                                     const VectorXd& rho, std::vector<std::string> names = {}) {
  return decompose(p.values, sigma_x.matrix(), rho, std::move(names));
}

struct IdentityReport {
  VectorXd residuals;  // total_i - rho_i
  double max_abs_residual = 0.0;
  bool within_tolerance = true;
};

IdentityReport verify_identity(const EffectDecomposition& d, const VectorXd& rho, double tol);

}  // namespace copath
