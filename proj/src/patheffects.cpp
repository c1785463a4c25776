#include "copath/patheffects.hpp"

#include <cmath>

namespace copath {

EffectDecomposition decompose(const VectorXd& coefficients, const MatrixXd& sigma_x,
                              const VectorXd& rho, std::vector<std::string> names) {
  const Eigen::Index p = coefficients.size();
  if (sigma_x.rows() != p || sigma_x.cols() != p || rho.size() != p)
    fail(Errc::DimensionMismatch, "decompose: coefficient, Sigma_X and rho dimensions differ");
  if (names.empty())
    for (Eigen::Index i = 1; i <= p; ++i) names.push_back("x" + std::to_string(i));
  if (static_cast<Eigen::Index>(names.size()) != p)
    fail(Errc::DimensionMismatch, "decompose: name count differs from coefficient count");

  EffectDecomposition out;
  out.rho = rho;
  out.effects.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    VariableEffect e;
    e.name = names[static_cast<std::size_t>(i)];
    e.direct = coefficients(i);
    e.via.assign(static_cast<std::size_t>(p), 0.0);
    for (Eigen::Index j = 0; j < p; ++j) {
      if (j == i) continue;
      const double contribution = sigma_x(i, j) * coefficients(j);
      e.via[static_cast<std::size_t>(j)] = contribution;
      e.indirect += contribution;
    }
    e.total = e.direct + e.indirect;
    out.effects.push_back(std::move(e));
  }
  return out;
}

IdentityReport verify_identity(const EffectDecomposition& d, const VectorXd& rho, double tol) {
  if (static_cast<Eigen::Index>(d.effects.size()) != rho.size())
    fail(Errc::DimensionMismatch, "verify_identity: rho length differs from decomposition");
  IdentityReport r;
  r.residuals.resize(rho.size());
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    r.residuals(i) = d.effects[static_cast<std::size_t>(i)].total - rho(i);
    r.max_abs_residual = std::max(r.max_abs_residual, std::abs(r.residuals(i)));
  }
  r.within_tolerance = r.max_abs_residual <= tol;
  return r;
}

}  // namespace copath
