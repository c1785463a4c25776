#include "copath/regression.hpp"

#include <algorithm>
#include <cmath>

#include "copath/distributions.hpp"
#include "copath/rng.hpp"
#include "copath/stats.hpp"

namespace copath {
namespace {

constexpr double kConditionalSlack = 1e-8;

struct Affine {
  double shift = 0.0;
  double scale = 1.0;
};

double family_nu(const CopulaFamily& family) {
  if (auto* t = std::get_if<StudentTFamily>(&family)) return t->nu;
  return 0.0;
}

// Marginals whose CDF composes with the family's latent quantile to an affine map.
std::optional<Affine> affine_link(const CopulaFamily& family, const MarginalModel& m) {
  if (std::holds_alternative<GaussianFamily>(family)) {
    if (std::holds_alternative<StandardNormalMarginal>(m)) return Affine{};
    if (auto* n = std::get_if<NormalMarginal>(&m)) return Affine{n->mean, n->sd};
    return std::nullopt;
  }
  if (auto* t = std::get_if<StudentTMarginal>(&m); t && t->nu == family_nu(family))
    return Affine{t->location, t->scale};
  return std::nullopt;
}

// Empirical marginals are rescaled so the sample extremes map to 1/(n+1) and
// n/(n+1); training points then land exactly on rank/(n+1).
double to_uniform(const MarginalModel& m, double x) {
  if (auto* e = std::get_if<EmpiricalMarginal>(&m)) {
    const double n = static_cast<double>(e->sorted().size());
    return (1.0 + (n - 1.0) * marginal_cdf(m, x)) / (n + 1.0);
  }
  return clamp_probability(marginal_cdf(m, x));
}

double from_uniform(const MarginalModel& m, double p) {
  if (auto* e = std::get_if<EmpiricalMarginal>(&m)) {
    const auto& s = e->sorted();
    const double n = static_cast<double>(s.size());
    const double q = std::clamp(((n + 1.0) * p - 1.0) / (n - 1.0), 0.0, 1.0);
    const double h = (n - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= s.size()) return s.back();
    return s[lo] + (h - static_cast<double>(lo)) * (s[lo + 1] - s[lo]);
  }
  return marginal_quantile(m, clamp_probability(p));
}

double latent_score(const CopulaFamily& family, const MarginalModel& m, double x) {
  if (auto a = affine_link(family, m)) return (x - a->shift) / a->scale;
  const double u = to_uniform(m, x);
  if (std::holds_alternative<GaussianFamily>(family)) return std_normal_quantile(u);
  return student_t_quantile(u, family_nu(family));
}

double from_latent(const CopulaFamily& family, const MarginalModel& m, double w) {
  if (auto a = affine_link(family, m)) return a->shift + a->scale * w;
  if (std::holds_alternative<GaussianFamily>(family)) return from_uniform(m, std_normal_cdf(w));
  return from_uniform(m, student_t_cdf(w, family_nu(family)));
}

std::shared_ptr<const std::vector<double>> make_draws(const CopulaFamily& family, Eigen::Index p,
                                                      const McSettings& mc) {
  auto draws = std::make_shared<std::vector<double>>();
  if (mc.n_draws == 0) return draws;
  draws->reserve(mc.n_draws);
  RandomStream rng(derive_seed(mc.seed, {label_key("mc-draws")}));
  const double nu = family_nu(family);
  for (std::size_t i = 0; i < mc.n_draws; ++i)
    draws->push_back(nu > 0.0 ? rng.student_t(nu + static_cast<double>(p)) : rng.normal());
  return draws;
}

struct Conditional {
  VectorXd rho;
  std::optional<CorrelationMatrix> sigma_x;
  double explained = 0.0;  // rho' Sigma_X^{-1} rho
  double residual = 1.0;   // 1 - explained, clamped at 0
};

Conditional conditional_of(const RegressionModel& model) {
  if (!model.sigma_hat)
    fail(Errc::InvalidArgument, "copula regression requires a copula model");
  auto part = partition(*model.sigma_hat);
  Conditional c{part.rho, std::move(part.sigma_x), 0.0, 1.0};
  c.explained = c.rho.dot(model.coefficients.values);
  if (c.explained > 1.0 + kConditionalSlack)
    fail(Errc::DegenerateConditional,
         "rho' Sigma_X^-1 rho = " + std::to_string(c.explained) + " exceeds 1");
  c.residual = std::max(0.0, 1.0 - c.explained);
  return c;
}

VectorXd latent_covariates(const VectorXd& x, const RegressionModel& model) {
  if (x.size() != model.p())
    fail(Errc::DimensionMismatch, "covariate vector length does not match the model");
  const auto family = model.family();
  VectorXd u(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    u(i) = latent_score(family, model.marginals[static_cast<std::size_t>(i + 1)], x(i));
  return u;
}

McEstimate average_over_draws(const RegressionModel& model, double center, double scale) {
  const auto& draws = *model.draws;
  if (draws.empty()) fail(Errc::InvalidArgument, "Monte-Carlo estimate needs n_draws > 0");
  const auto family = model.family();
  const auto& y_marginal = model.marginals.front();
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double z : draws) {
    const double v = from_latent(family, y_marginal, center + scale * z);
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(k);
  const double sd = k > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n)};
}

void require_family(const RegressionModel& model, MethodKind kind, const char* where) {
  if (model.method.kind != kind)
    fail(Errc::InvalidArgument, std::string(where) + ": model family mismatch");
}

}  // namespace

std::string method_name(const Method& m) {
  switch (m.kind) {
    case MethodKind::Classical: return "classical";
    case MethodKind::GaussianCopula: return "gaussian_copula";
    case MethodKind::TCopula: return "t_copula";
  }
  return "unknown";
}

Method parse_method(const std::string& name, double nu) {
  if (name == "classical" || name == "ols") return Method::classical();
  if (name == "gaussian_copula" || name == "gaussian") return Method::gaussian_copula();
  if (name == "t_copula" || name == "t") {
    if (!(nu > 1.0)) fail(Errc::InvalidArgument, "t copula regression needs nu > 1");
    return Method::t_copula(nu);
  }
  fail(Errc::InvalidArgument, "unknown method '" + name + "'");
}

CopulaFamily RegressionModel::family() const {
  if (method.kind == MethodKind::TCopula) return StudentTFamily{method.nu};
  return GaussianFamily{};
}

PathCoefficients ols_fit(const Dataset& data, const std::string& endogenous,
                         const std::vector<std::string>& exogenous) {
  const Eigen::Index p = static_cast<Eigen::Index>(exogenous.size());
  if (p == 0) fail(Errc::InvalidArgument, "ols_fit: no exogenous variables");
  if (data.rows() <= p)
    fail(Errc::TooFewObservations, "ols_fit: need more rows than exogenous variables");
  MatrixXd x(data.rows(), p);
  for (Eigen::Index j = 0; j < p; ++j) x.col(j) = data.col(exogenous[static_cast<std::size_t>(j)]);
  const VectorXd y = data.col(endogenous);

  const MatrixXd gram = x.transpose() * x;
  if (!is_positive_definite(gram))
    fail(Errc::SingularDesign, "ols_fit: design matrix is rank deficient");
  VectorXd beta = x.colPivHouseholderQr().solve(y);
  return {std::move(beta), 0.0, Method::classical()};
}

PathCoefficients gaussian_closed_form(const VectorXd& rho, const CorrelationMatrix& sigma_x) {
  if (rho.size() != sigma_x.dim())
    fail(Errc::DimensionMismatch, "gaussian_closed_form: rho length does not match Sigma_X");
  return {solve_spd(sigma_x.matrix(), rho), 0.0, Method::gaussian_copula()};
}

RegressionModel make_copula_model(const CopulaFamily& family, const CorrelationMatrix& sigma,
                                  std::vector<MarginalModel> marginals, McSettings mc,
                                  std::vector<std::string> names) {
  if (static_cast<Eigen::Index>(marginals.size()) != sigma.dim())
    fail(Errc::DimensionMismatch, "make_copula_model: marginal count must equal matrix dimension");
  if (names.empty()) names = default_names(sigma.dim() - 1);
  if (static_cast<Eigen::Index>(names.size()) != sigma.dim())
    fail(Errc::DimensionMismatch, "make_copula_model: name count must equal matrix dimension");
  for (const auto& m : marginals) validate(m);

  RegressionModel model;
  if (auto* t = std::get_if<StudentTFamily>(&family)) {
    if (!(t->nu > 1.0))
      fail(Errc::Domain, "t copula regression needs nu > 1 for the mean to exist");
    model.method = Method::t_copula(t->nu);
  } else {
    model.method = Method::gaussian_copula();
  }
  model.endogenous = names.front();
  model.exogenous.assign(names.begin() + 1, names.end());
  const auto part = partition(sigma);
  model.coefficients = gaussian_closed_form(part.rho, part.sigma_x);
  model.coefficients.method = model.method;
  model.marginals = std::move(marginals);
  model.sigma_hat = sigma;
  model.mc = mc;
  conditional_of(model);  // rejects inconsistent correlation input early
  model.draws = make_draws(family, model.p(), mc);
  return model;
}

RegressionModel fit_classical(const Dataset& data, const std::string& endogenous,
                              const std::vector<std::string>& exogenous) {
  RegressionModel model;
  model.method = Method::classical();
  model.endogenous = endogenous;
  model.exogenous = exogenous;
  model.coefficients = ols_fit(data, endogenous, exogenous);
  model.draws = std::make_shared<std::vector<double>>();
  return model;
}

RegressionModel fit_copula(const Dataset& data, const std::string& endogenous,
                           const std::vector<std::string>& exogenous, const CopulaFamily& family,
                           MarginalFit marginal_fit, McSettings mc) {
  const Dataset sub = data.select(endogenous, exogenous);
  if (sub.rows() <= static_cast<Eigen::Index>(exogenous.size()) + 1)
    fail(Errc::TooFewObservations, "fit_copula: too few rows for the number of variables");
  std::vector<MarginalModel> marginals;
  MatrixXd scores(sub.rows(), sub.cols());
  for (Eigen::Index j = 0; j < sub.cols(); ++j) {
    const auto column = sub.col(j);
    if (marginal_fit == MarginalFit::Normal) {
      const double sd = sample_sd(column);
      if (detail::is_degenerate(column, sd))
        fail(Errc::DegenerateColumn, "fit_copula: column '" + sub.names()[static_cast<std::size_t>(j)] +
                                         "' has zero variance");
      marginals.emplace_back(NormalMarginal{column.mean(), sd});
    } else {
      marginals.emplace_back(EmpiricalMarginal(std::vector<double>(column.begin(), column.end())));
    }
    for (Eigen::Index i = 0; i < sub.rows(); ++i)
      scores(i, j) = latent_score(family, marginals.back(), column(i));
  }
  CorrelationMatrix sigma(pearson_correlation(scores));
  return make_copula_model(family, sigma, std::move(marginals), mc, sub.names());
}

RegressionModel fit(const Method& method, const Dataset& data, const std::string& endogenous,
                    const std::vector<std::string>& exogenous, MarginalFit marginal_fit,
                    McSettings mc) {
  switch (method.kind) {
    case MethodKind::Classical: return fit_classical(data, endogenous, exogenous);
    case MethodKind::GaussianCopula:
      return fit_copula(data, endogenous, exogenous, GaussianFamily{}, marginal_fit, mc);
    case MethodKind::TCopula:
      return fit_copula(data, endogenous, exogenous, StudentTFamily{method.nu}, marginal_fit, mc);
  }
  fail(Errc::InvalidArgument, "fit: unknown method");
}

double explained_fraction(const RegressionModel& model) { return conditional_of(model).explained; }

McEstimate gaussian_copula_regression_mc(const VectorXd& x, const RegressionModel& model) {
  require_family(model, MethodKind::GaussianCopula, "gaussian_copula_regression_mc");
  const auto c = conditional_of(model);
  const VectorXd u = latent_covariates(x, model);
  return average_over_draws(model, u.dot(model.coefficients.values), std::sqrt(c.residual));
}

McEstimate t_copula_regression_mc(const VectorXd& x, const RegressionModel& model) {
  require_family(model, MethodKind::TCopula, "t_copula_regression_mc");
  const double nu = model.method.nu;
  if (!(nu > 1.0)) fail(Errc::Domain, "t_copula_regression_mc: nu must exceed 1");
  const auto c = conditional_of(model);
  const VectorXd u = latent_covariates(x, model);
  const double quad = u.dot(solve_spd(c.sigma_x->matrix(), u));
  const double p = static_cast<double>(model.p());
  const double scale = std::sqrt(nu * c.residual * (1.0 + quad / nu) / (nu + p));
  return average_over_draws(model, u.dot(model.coefficients.values), scale);
}

double t_common_rho_closed_form(const VectorXd& x, double rho, double mu) {
  if (x.size() != 2) fail(Errc::DimensionMismatch, "t_common_rho_closed_form: needs two covariates");
  if (!(rho > -1.0 && rho < 1.0))
    fail(Errc::Domain, "t_common_rho_closed_form: rho must lie in (-1, 1)");
  const double slope = rho / (1.0 + rho);
  return (1.0 - rho) / (1.0 + rho) * mu + slope * x(0) + slope * x(1);
}

double conditional_mean(const VectorXd& x, const RegressionModel& model) {
  if (x.size() != model.p())
    fail(Errc::DimensionMismatch, "covariate vector length does not match the model");
  if (model.method.kind == MethodKind::Classical)
    return model.coefficients.intercept + x.dot(model.coefficients.values);

  const auto family = model.family();
  if (model.mc.mode == McMode::Auto) {
    if (auto a = affine_link(family, model.marginals.front())) {
      conditional_of(model);
      return a->shift + a->scale * latent_covariates(x, model).dot(model.coefficients.values);
    }
  }
  return model.method.kind == MethodKind::GaussianCopula
             ? gaussian_copula_regression_mc(x, model).value
             : t_copula_regression_mc(x, model).value;
}

VectorXd predict(const RegressionModel& model, const Dataset& data) {
  MatrixXd x(data.rows(), model.p());
  for (Eigen::Index j = 0; j < model.p(); ++j) {
    const auto& name = model.exogenous[static_cast<std::size_t>(j)];
    const auto idx = data.find(name);
    if (!idx) fail(Errc::SchemaMismatch, "predict: dataset lacks exogenous column '" + name + "'");
    x.col(j) = data.col(*idx);
  }
  VectorXd out(data.rows());
  for (Eigen::Index i = 0; i < data.rows(); ++i) out(i) = conditional_mean(x.row(i).transpose(), model);
  return out;
}

}  // namespace copath
