#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "copath/distributions.hpp"
#include "copath/regression.hpp"
#include "copath/simulation.hpp"
#include "copath/stats.hpp"
#include "oracles.hpp"

using namespace copath;
using doctest::Approx;

namespace {

std::vector<MarginalModel> standard_normals(Eigen::Index dim) {
  return std::vector<MarginalModel>(static_cast<std::size_t>(dim), StandardNormalMarginal{});
}

Dataset standardized_dataset(const MatrixXd& raw) {
  MatrixXd z(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) z.col(j) = standardize(raw.col(j));
  std::vector<std::string> names{"y"};
  for (Eigen::Index j = 1; j < raw.cols(); ++j) names.push_back("x" + std::to_string(j));
  return Dataset(names, z, true);
}

MatrixXd correlated_data(int n, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  MatrixXd m(n, cols);
  for (int i = 0; i < n; ++i) {
    double common = z(gen);
    for (int j = 0; j < cols; ++j) m(i, j) = z(gen) + 0.6 * common;
  }
  return m;
}

// Coarse-to-fine grid search for the least-squares minimizer in two dimensions.
VectorXd grid_least_squares(const MatrixXd& x, const VectorXd& y) {
  VectorXd best = VectorXd::Zero(2);
  double width = 4.0;
  for (int level = 0; level < 12; ++level) {
    VectorXd center = best;
    double best_ss = oracle::sum_sq(x, y, best);
    for (int i = -20; i <= 20; ++i)
      for (int j = -20; j <= 20; ++j) {
        VectorXd b(2);
        b << center(0) + width * i / 20.0, center(1) + width * j / 20.0;
        const double ss = oracle::sum_sq(x, y, b);
        if (ss < best_ss) {
          best_ss = ss;
          best = b;
        }
      }
    width /= 8.0;
  }
  return best;
}

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) out(i++) = e;
  return out;
}

CorrelationMatrix corr2(double r) {
  MatrixXd m(2, 2);
  m << 1, r, r, 1;
  return CorrelationMatrix(m);
}

}  // namespace

TEST_CASE("method names") {
  CHECK(method_name(Method::classical()) == "classical");
  CHECK(method_name(Method::gaussian_copula()) == "gaussian_copula");
  CHECK(method_name(Method::t_copula(5)) == "t_copula");
  CHECK(parse_method("ols") == Method::classical());
  CHECK(parse_method("gaussian") == Method::gaussian_copula());
  CHECK(parse_method("t", 7.0) == Method::t_copula(7.0));
  CHECK_THROWS_AS(parse_method("vine"), Error);
  CHECK_THROWS_AS(parse_method("t_copula", 1.0), Error);
}

TEST_CASE("ols rejects a collinear design") {
  std::mt19937_64 gen(1);
  MatrixXd raw = correlated_data(30, 3, gen);
  raw.col(2) = raw.col(1);
  const Dataset d = standardized_dataset(raw);
  try {
    ols_fit(d, "y", {"x1", "x2"});
    FAIL("expected SingularDesign");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SingularDesign);
  }
}

TEST_CASE("ols needs more rows than regressors") {
  MatrixXd raw(2, 3);
  raw << 1, 2, 3, 4, 5, 7;
  const Dataset d({"y", "x1", "x2"}, raw);
  try {
    ols_fit(d, "y", {"x1", "x2"});
    FAIL("expected TooFewObservations");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewObservations);
  }
}

TEST_CASE("ols on standardized p=2 data matches the ratio formulas and a grid search") {
  std::mt19937_64 gen(8);
  const Dataset d = standardized_dataset(correlated_data(20, 3, gen));
  const auto p = ols_fit(d, "y", {"x1", "x2"});
  const MatrixXd r = pearson_correlation(d.values());
  const double r1 = r(0, 1), r2 = r(0, 2), r12 = r(1, 2);
  CHECK(p.values(0) == Approx((r1 - r2 * r12) / (1 - r12 * r12)).epsilon(1e-12));
  CHECK(p.values(1) == Approx((r2 - r1 * r12) / (1 - r12 * r12)).epsilon(1e-12));
  CHECK(p.intercept == 0.0);
  CHECK(p.method == Method::classical());

  const MatrixXd x = d.values().rightCols(2);
  const VectorXd y = d.col(0);
  const VectorXd grid = grid_least_squares(x, y);
  CHECK((p.values - grid).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((p.values - oracle::normal_equations(x, y)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ols equals the closed form on standardized data") {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 100; ++t) {
    const int p = 1 + t % 4;
    const Dataset d = standardized_dataset(correlated_data(10 + 7 * (t % 20), p + 1, gen));
    std::vector<std::string> xs(d.names().begin() + 1, d.names().end());
    const auto ols = ols_fit(d, "y", xs);
    const MatrixXd r = pearson_correlation(d.values());
    const VectorXd rho = r.col(0).tail(p);
    const auto closed = gaussian_closed_form(rho, CorrelationMatrix(r.bottomRightCorner(p, p)));
    CHECK((ols.values - closed.values).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("gaussian closed form examples") {
  auto p = gaussian_closed_form(vec({0.3, -0.5}), corr2(0.1));
  CHECK(p.values(0) == Approx(0.35353535353535354).epsilon(1e-14));
  CHECK(p.values(1) == Approx(-0.53535353535353535).epsilon(1e-14));
  CHECK(p.method == Method::gaussian_copula());
  p = gaussian_closed_form(vec({0.6, 0.7}), corr2(0.5));
  CHECK(p.values(0) == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(p.values(1) == Approx(8.0 / 15.0).epsilon(1e-14));
  const VectorXd rho = vec({0.2, -0.1, 0.4});
  CHECK(gaussian_closed_form(rho, CorrelationMatrix::identity(3)).values.isApprox(rho));
  CHECK_THROWS_AS(gaussian_closed_form(vec({0.1}), corr2(0.2)), Error);
}

TEST_CASE("gaussian copula regression by simulation agrees with the closed form") {
  const auto sigma = builtin_sigma(2, Level::Low);
  const auto model = make_copula_model(GaussianFamily{}, sigma, standard_normals(3),
                                       {100000, 3, McMode::MonteCarlo});
  const auto x = vec({1.0, 1.0});
  CHECK(conditional_mean(x, make_copula_model(GaussianFamily{}, sigma, standard_normals(3))) ==
        Approx(0.35353535353535354 - 0.53535353535353535).epsilon(1e-14));
  CHECK(0.35353535353535354 - 0.53535353535353535 == Approx(-0.181818).epsilon(1e-6));
  for (double a : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
    const auto xv = vec({a, 1.0 - a});
    const auto est = gaussian_copula_regression_mc(xv, model);
    const double closed = xv.dot(model.coefficients.values);
    CHECK(std::abs(est.value - closed) <= 3.0 * est.std_error);
    CHECK(est.std_error == Approx(std::sqrt(1.0 - explained_fraction(model)) / std::sqrt(1e5)).epsilon(0.02));
  }
}

TEST_CASE("independent covariates leave the marginal mean") {
  const auto model = make_copula_model(
      GaussianFamily{}, CorrelationMatrix::identity(3),
      {NormalMarginal{2.0, 3.0}, StandardNormalMarginal{}, StandardNormalMarginal{}},
      {50000, 11, McMode::MonteCarlo});
  const auto est = gaussian_copula_regression_mc(vec({1.5, -0.4}), model);
  CHECK(std::abs(est.value - 2.0) <= 3.0 * est.std_error);

  const auto t_model = make_copula_model(
      StudentTFamily{5.0}, CorrelationMatrix::identity(3),
      {StudentTMarginal{5.0, -1.0, 2.0}, StandardNormalMarginal{}, StandardNormalMarginal{}},
      {50000, 12, McMode::MonteCarlo});
  const auto t_est = t_copula_regression_mc(vec({0.3, 2.0}), t_model);
  CHECK(std::abs(t_est.value + 1.0) <= 3.0 * t_est.std_error);
}

TEST_CASE("t copula regression with huge nu approaches the Gaussian form") {
  const auto sigma = builtin_sigma(2, Level::Medium);
  const auto t_model = make_copula_model(StudentTFamily{1e6}, sigma, standard_normals(3),
                                         {100000, 4, McMode::MonteCarlo});
  const auto g_model = make_copula_model(GaussianFamily{}, sigma, standard_normals(3),
                                         {100000, 4, McMode::MonteCarlo});
  for (double a : {-1.5, 0.0, 2.0}) {
    const auto x = vec({a, 0.5});
    const auto t = t_copula_regression_mc(x, t_model);
    const auto g = gaussian_copula_regression_mc(x, g_model);
    CHECK(std::abs(t.value - g.value) <= 3.0 * std::hypot(t.std_error, g.std_error) + 1e-3);
    CHECK(std::abs(t.value - x.dot(g_model.coefficients.values)) <= 4.0 * t.std_error + 1e-3);
  }
}

TEST_CASE("common correlation t copula") {
  CHECK(t_common_rho_closed_form(vec({1, 1}), 1.0 / 3.0, 0.0) == Approx(0.5).epsilon(1e-15));
  CHECK(t_common_rho_closed_form(vec({0, 0}), 1.0 / 3.0, 4.0) == Approx(2.0).epsilon(1e-15));
  CHECK(t_common_rho_closed_form(vec({3.2, -7}), 0.0, 1.25) == 1.25);
  CHECK_THROWS_AS(t_common_rho_closed_form(vec({1, 1}), -1.0, 0.0), Error);
  CHECK_THROWS_AS(t_common_rho_closed_form(vec({1, 1, 1}), 0.2, 0.0), Error);

  MatrixXd m = MatrixXd::Constant(3, 3, 1.0 / 3.0);
  m.diagonal().setOnes();
  const std::vector<MarginalModel> tm(3, StudentTMarginal{4.0, 0.0, 1.0});
  const auto model = make_copula_model(StudentTFamily{4.0}, CorrelationMatrix(m), tm,
                                       {100000, 9, McMode::MonteCarlo});
  const auto est = t_copula_regression_mc(vec({1, 1}), model);
  CHECK(std::abs(est.value - 0.5) <= 3.0 * est.std_error);
  CHECK(conditional_mean(vec({1, 1}), make_copula_model(StudentTFamily{4.0}, CorrelationMatrix(m), tm)) ==
        Approx(0.5).epsilon(1e-14));
}

TEST_CASE("t copula needs a finite mean") {
  CHECK_THROWS_AS(make_copula_model(StudentTFamily{1.0}, builtin_sigma(2, Level::Low), standard_normals(3)),
                  Error);
  const auto g = make_copula_model(GaussianFamily{}, builtin_sigma(2, Level::Low), standard_normals(3));
  CHECK_THROWS_AS(t_copula_regression_mc(vec({0, 0}), g), Error);
}

TEST_CASE("monte carlo error shrinks like one over root n") {
  const auto sigma = builtin_sigma(2, Level::High);
  const std::vector<MarginalModel> marginals{NormalMarginal{1.0, 2.0}, StandardNormalMarginal{},
                                             StandardNormalMarginal{}};
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t n : {1000u, 4000u, 16000u, 64000u}) {
    const auto model = make_copula_model(GaussianFamily{}, sigma, marginals, {n, 2, McMode::MonteCarlo});
    lx.push_back(std::log(double(n)));
    ly.push_back(std::log(gaussian_copula_regression_mc(vec({0.2, 0.3}), model).std_error));
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4;
  const double my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  CHECK(std::abs(sxy / sxx + 0.5) <= 0.1);
}

TEST_CASE("conditional variance is nonnegative") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 500; ++t) {
    const MatrixXd m = oracle::random_correlation(2 + t % 5, gen, t % 2 ? 0.01 : 0.3);
    const auto model = make_copula_model(GaussianFamily{}, CorrelationMatrix(m),
                                         standard_normals(m.rows()), {0, 0, McMode::Auto});
    const double e = explained_fraction(model);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
}

TEST_CASE("predictions") {
  std::mt19937_64 gen(13);
  const Dataset d = standardized_dataset(correlated_data(60, 3, gen));
  const auto classical = fit_classical(d, "y", {"x1", "x2"});
  const Dataset zeros({"x1", "x2", "y"}, MatrixXd::Zero(4, 3));
  CHECK(predict(classical, zeros).isZero());

  const MatrixXd r = pearson_correlation(d.values());
  const auto copula = make_copula_model(GaussianFamily{}, CorrelationMatrix(r), standard_normals(3), {},
                                        {"y", "x1", "x2"});
  CHECK((predict(copula, d) - predict(classical, d)).cwiseAbs().maxCoeff() <= 1e-10);

  const Dataset one({"x2", "x1"}, MatrixXd::Constant(1, 2, 0.7));
  CHECK(predict(copula, one).size() == 1);
  CHECK(predict(copula, one)(0) == Approx(0.7 * copula.coefficients.values.sum()));

  const Dataset missing({"x1", "z"}, MatrixXd::Zero(2, 2));
  try {
    predict(classical, missing);
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaMismatch);
  }
}

TEST_CASE("copula fits with normal marginals reproduce ols on standardized data") {
  std::mt19937_64 gen(29);
  const Dataset d = standardized_dataset(correlated_data(80, 4, gen));
  const std::vector<std::string> xs{"x1", "x2", "x3"};
  const auto classical = fit_classical(d, "y", xs);
  const auto copula = fit(Method::gaussian_copula(), d, "y", xs);
  CHECK((copula.coefficients.values - classical.coefficients.values).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((predict(copula, d) - predict(classical, d)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(copula.sigma_hat.has_value());
  CHECK(copula.sigma_hat->dim() == 4);
  CHECK(copula.marginals.size() == 4);
}

TEST_CASE("copula fits on raw data with other marginals") {
  std::mt19937_64 gen(30);
  MatrixXd raw = correlated_data(120, 3, gen);
  raw.col(0) = raw.col(0).array().exp();
  const Dataset d({"y", "a", "b"}, raw);
  const auto empirical = fit(Method::gaussian_copula(), d, "y", {"a", "b"}, MarginalFit::Empirical,
                             {2000, 1, McMode::Auto});
  const VectorXd pe = predict(empirical, d);
  CHECK(pe.allFinite());
  CHECK(pe.minCoeff() >= raw.col(0).minCoeff());
  CHECK(pe.maxCoeff() <= raw.col(0).maxCoeff());

  const auto t = fit(Method::t_copula(6.0), d, "y", {"a", "b"}, MarginalFit::Normal, {2000, 1});
  CHECK(t.method == Method::t_copula(6.0));
  const VectorXd pt = predict(t, d);
  CHECK(pt.allFinite());
  // predictions rise with the covariates when both correlations are positive
  CHECK(conditional_mean(vec({3.0, 3.0}), t) > conditional_mean(vec({-3.0, -3.0}), t));
  // shared draws make repeated calls identical
  CHECK(conditional_mean(vec({0.1, 0.2}), t) == conditional_mean(vec({0.1, 0.2}), t));
}
