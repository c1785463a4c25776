#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "copath/distributions.hpp"
#include "copath/linalg.hpp"
#include "copath/rng.hpp"
#include "copath/stats.hpp"
#include "oracles.hpp"

using namespace copath;
using doctest::Approx;

TEST_CASE("normal cdf at reference points") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  // mpmath at 40 digits
  CHECK(std_normal_cdf(1.959964) == Approx(0.975000000903557596).epsilon(1e-15));
  CHECK(std_normal_cdf(-6.0) == Approx(9.865876450376981e-10).epsilon(1e-13));
  CHECK(std_normal_cdf(2.0) == Approx(0.9772498680518208).epsilon(1e-15));
}

TEST_CASE("normal cdf agrees with quadrature of the density") {
  for (double x : {-8.0, -6.0, -3.3, -1.0, -0.2, 0.7, 1.959964, 2.5, 4.0}) {
    CAPTURE(x);
    CHECK(std::abs(std_normal_cdf(x) - oracle::normal_cdf_by_quadrature(x)) <= 1e-12);
  }
}

TEST_CASE("normal cdf symmetry and monotonicity") {
  double prev = 0.0;
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    const double f = std_normal_cdf(x);
    CHECK(f >= prev);
    CHECK(std::abs(std_normal_cdf(-x) - (1.0 - f)) <= 1e-15);
    prev = f;
  }
}

TEST_CASE("normal quantile reference points") {
  CHECK(std_normal_quantile(0.5) == 0.0);
  CHECK(std_normal_quantile(0.975) == Approx(1.959963984540054).epsilon(1e-14));
  CHECK(std_normal_quantile(1e-8) == Approx(-5.612001244174789).epsilon(1e-13));
  const auto by_bisection = [](double p) {
    return oracle::bisect(oracle::normal_cdf_by_quadrature, p, -12.0, 12.0);
  };
  CHECK(std_normal_quantile(0.975) == Approx(by_bisection(0.975)).epsilon(1e-10));
  CHECK(std_normal_quantile(1e-8) == Approx(by_bisection(1e-8)).epsilon(1e-8));
}

TEST_CASE("normal quantile domain") {
  for (double p : {0.0, 1.0, -0.1, 1.5, std::nan("")}) CHECK_THROWS_AS(std_normal_quantile(p), Error);
  try {
    std_normal_quantile(0.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Domain);
  }
}

TEST_CASE("quantile and cdf round-trip on a log grid") {
  for (double lp = -8.0; lp <= -0.31; lp += 0.05) {
    for (double p : {std::pow(10.0, lp), 1.0 - std::pow(10.0, lp)}) {
      CAPTURE(p);
      CHECK(std::abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-10);
      CHECK(std_normal_quantile(1.0 - p) == Approx(-std_normal_quantile(p)).epsilon(1e-9));
      for (double nu : {1.0, 3.0, 10.0, 100.0}) {
        CAPTURE(nu);
        CHECK(std::abs(student_t_cdf(student_t_quantile(p, nu), nu) - p) <= 1e-10);
      }
    }
  }
}

TEST_CASE("student t cdf") {
  for (double nu : {0.5, 1.0, 2.0, 7.5, 1e6}) CHECK(student_t_cdf(0.0, nu) == 0.5);
  // Cauchy: F(x) = 1/2 + atan(x)/pi
  for (double x : {-30.0, -2.0, -0.3, 1.0, 4.0}) {
    CAPTURE(x);
    CHECK(student_t_cdf(x, 1.0) == Approx(0.5 + std::atan(x) / oracle::kPi).epsilon(1e-13));
  }
  CHECK(student_t_cdf(1.0, 1.0) == Approx(0.75).epsilon(1e-14));
  // nu = 2: F(x) = 1/2 + x / (2 sqrt(2 + x^2))
  for (double x : {-5.0, -0.5, 0.8, 3.0})
    CHECK(student_t_cdf(x, 2.0) == Approx(0.5 + x / (2.0 * std::sqrt(2.0 + x * x))).epsilon(1e-13));
  CHECK(std::abs(student_t_cdf(2.0, 1e6) - std_normal_cdf(2.0)) <= 1e-4);
  for (double x : {-3.0, -1.0, 0.4, 2.2})
    CHECK(student_t_cdf(-x, 4.5) == Approx(1.0 - student_t_cdf(x, 4.5)).epsilon(1e-13));
  CHECK_THROWS_AS(student_t_cdf(1.0, 0.0), Error);
  CHECK_THROWS_AS(student_t_cdf(1.0, -2.0), Error);
}

TEST_CASE("student t cdf against quadrature of its density") {
  for (double nu : {3.0, 12.0}) {
    const auto pdf = [nu](double t) { return student_t_pdf(t, nu); };
    for (double x : {-2.0, 0.5, 1.7}) {
      const double ref = 0.5 + oracle::simpson(pdf, 0.0, x, 20000);
      CHECK(student_t_cdf(x, nu) == Approx(ref).epsilon(1e-11));
    }
  }
}

TEST_CASE("student t quantile") {
  CHECK(student_t_quantile(0.5, 5.0) == 0.0);
  CHECK(student_t_quantile(0.75, 1.0) == Approx(1.0).epsilon(1e-12));
  for (double p : {0.01, 0.3, 0.9})
    CHECK(student_t_quantile(p, 1.0) == Approx(std::tan(oracle::kPi * (p - 0.5))).epsilon(1e-11));
  CHECK(student_t_quantile(0.975, 1e6) == Approx(1.95997).epsilon(1e-5));
  CHECK(std::abs(student_t_quantile(0.975, 1e6) - std_normal_quantile(0.975)) < 1e-5);
  CHECK_THROWS_AS(student_t_quantile(0.0, 3.0), Error);
  CHECK_THROWS_AS(student_t_quantile(0.5, 0.0), Error);
}

TEST_CASE("log gamma ratio against lgamma") {
  for (double a : {0.5, 1.0, 3.7, 19.9, 20.0, 55.0, 1e3}) {
    CAPTURE(a);
    CHECK(log_gamma_ratio_half(a) == Approx(std::lgamma(a + 0.5) - std::lgamma(a)).epsilon(1e-12));
  }
}

TEST_CASE("cholesky examples") {
  CHECK(cholesky(MatrixXd::Identity(3, 3)).isApprox(MatrixXd::Identity(3, 3)));
  MatrixXd m(2, 2);
  m << 1, 0.5, 0.5, 1;
  const MatrixXd l = cholesky(m);
  CHECK(l(0, 0) == Approx(1.0));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == Approx(0.5));
  CHECK(l(1, 1) == Approx(0.8660254037844386).epsilon(1e-15));
  CHECK(((l * l.transpose()) - m).cwiseAbs().maxCoeff() <= 1e-15);

  MatrixXd bad(2, 2);
  bad << 1, 1.01, 1.01, 1;
  // eigenvalues 1 +- 1.01: one is negative
  CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(bad).eigenvalues().minCoeff() < 0);
  try {
    cholesky(bad);
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotPositiveDefinite);
  }
  MatrixXd near(2, 2);
  near << 1, 0.99, 0.99, 1;
  CHECK(is_positive_definite(near));
  MatrixXd singular(2, 2);
  singular << 1, 1, 1, 1;
  CHECK_FALSE(is_positive_definite(singular));
  MatrixXd asym(2, 2);
  asym << 1, 0.2, 0.3, 1;
  CHECK_THROWS_AS(cholesky(asym), Error);
  CHECK_THROWS_AS(cholesky(MatrixXd(2, 3)), Error);
}

TEST_CASE("cholesky reconstruction on random SPD matrices") {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 200; ++t) {
    const int dim = 1 + t % 6;
    const MatrixXd m = oracle::random_spd(dim, gen);
    const MatrixXd l = cholesky(m);
    CHECK(l.isLowerTriangular());
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    const double err = (l * l.transpose() - m).cwiseAbs().rowwise().sum().maxCoeff();
    CHECK(err <= 1e-12 * norm);
  }
}

TEST_CASE("solve_spd examples") {
  VectorXd rhs(3);
  rhs << 0.2, -1.0, 4.0;
  CHECK(solve_spd(MatrixXd::Identity(3, 3), rhs).isApprox(rhs));

  MatrixXd m(2, 2);
  m << 1, 0.1, 0.1, 1;
  VectorXd b(2);
  b << 0.3, -0.5;
  const VectorXd x = solve_spd(m, b);
  CHECK(x(0) == Approx(0.35353535353535354).epsilon(1e-14));
  CHECK(x(1) == Approx(-0.53535353535353535).epsilon(1e-14));

  MatrixXd medium(3, 3);
  medium << 1, 0.2, 0.1, 0.2, 1, 0.2, 0.1, 0.2, 1;
  VectorXd r(3);
  r << 0.5, 0.4, 0.3;
  const VectorXd ref = oracle::gauss_solve(medium, r);
  const VectorXd got = solve_spd(medium, r);
  CHECK((got - ref).cwiseAbs().maxCoeff() <= 1e-14);
  // frozen from the elimination oracle
  CHECK(got(0) == Approx(0.42483660130718954).epsilon(1e-14));
  CHECK(got(1) == Approx(0.27450980392156865).epsilon(1e-14));
  CHECK(got(2) == Approx(0.20261437908496730).epsilon(1e-14));
  CHECK((medium * got - r).cwiseAbs().maxCoeff() <= 1e-10 * r.norm());

  CHECK_THROWS_AS(solve_spd(m, r), Error);
}

TEST_CASE("solve_spd matches the adjugate inverse") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> z;
  for (int t = 0; t < 200; ++t) {
    const int dim = 1 + t % 4;
    const MatrixXd m = oracle::random_spd(dim, gen);
    VectorXd b(dim);
    for (int i = 0; i < dim; ++i) b(i) = z(gen);
    const VectorXd ref = oracle::adjugate_inverse(m) * b;
    CHECK((solve_spd(m, b) - ref).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, ref.norm()));
  }
}

TEST_CASE("standardize") {
  VectorXd v(3);
  v << 1, 2, 3;
  const VectorXd s = standardize(v);
  CHECK(s(0) == Approx(-1.0));
  CHECK(s(1) == Approx(0.0));
  CHECK(s(2) == Approx(1.0));

  std::mt19937_64 gen(3);
  std::gamma_distribution<double> g(2.0, 3.0);
  for (int t = 0; t < 50; ++t) {
    VectorXd x(10 + t);
    for (auto& e : x) e = g(gen) + 100.0;
    const VectorXd once = standardize(x);
    CHECK(std::abs(sample_mean(once)) <= 1e-12);
    CHECK(sample_sd(once) == Approx(1.0).epsilon(1e-12));
    CHECK((standardize(once) - once).cwiseAbs().maxCoeff() <= 1e-12);
  }
  try {
    standardize(VectorXd::Constant(5, 3.2));
    FAIL("expected DegenerateColumn");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateColumn);
  }
  CHECK_THROWS_AS(standardize(VectorXd::Constant(1, 3.2)), Error);
}

TEST_CASE("standardize is templated on the scalar") {
  Eigen::VectorXf v(4);
  v << 1, 2, 3, 6;
  const Eigen::VectorXf s = standardize(v);
  CHECK(s.mean() == Approx(0.0).epsilon(1e-6));
}

TEST_CASE("pearson correlation") {
  MatrixXd d(5, 3);
  d << 1, 1, -1, 2, 2, -2, 3, 3, -3, 4, 4, -4, 7, 7, -7;
  const MatrixXd r = pearson_correlation(d);
  CHECK(r(0, 1) == 1.0);
  CHECK(r(0, 2) == -1.0);
  CHECK(r.diagonal().isOnes());
  CHECK(r.isApprox(r.transpose()));

  std::mt19937_64 gen(17);
  std::normal_distribution<double> z;
  MatrixXd x(30, 4);
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) x(i, j) = z(gen) + (j == 3 ? x(i, 0) : 0.0);
  const MatrixXd c = pearson_correlation(x);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const VectorXd a = x.col(i).array() - x.col(i).mean();
      const VectorXd b = x.col(j).array() - x.col(j).mean();
      CHECK(c(i, j) == Approx(a.dot(b) / std::sqrt(a.squaredNorm() * b.squaredNorm())).epsilon(1e-13));
      CHECK(std::abs(c(i, j)) <= 1.0);
    }
  MatrixXd constant(4, 2);
  constant << 1, 2, 1, 3, 1, 4, 1, 5;
  CHECK_THROWS_AS(pearson_correlation(constant), Error);
  CHECK_THROWS_AS(pearson_correlation(MatrixXd(1, 2)), Error);
}

TEST_CASE("ks statistic on a quantile grid") {
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back(std_normal_quantile((i - 0.5) / 100.0));
  const auto r = ks_test_normal(grid);
  CHECK(r.statistic == Approx(0.005).epsilon(1e-12));
  CHECK(r.n == 100);
  CHECK(r.p_value > 0.99);
}

TEST_CASE("ks rejects a raw uniform sample") {
  RandomStream rng(2024);
  std::vector<double> u(500);
  for (auto& v : u) v = rng.uniform();
  const auto r = ks_test_normal(u);
  CHECK(r.p_value < 0.01);
}

TEST_CASE("ks needs eight observations") {
  try {
    ks_test_normal(std::vector<double>{0.1, 0.2, -0.3, 0.5, 1.0});
    FAIL("expected TooFewObservations");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewObservations);
  }
}

TEST_CASE("ks statistic equals the naive sup distance") {
  std::mt19937_64 gen(99);
  std::student_t_distribution<double> t(3.0);
  for (int n = 8; n <= 50; ++n) {
    std::vector<double> x(n);
    for (auto& v : x) v = t(gen);
    if (n % 5 == 0) x[1] = x[0];  // a tie
    CAPTURE(n);
    CHECK(ks_test_normal(x).statistic ==
          Approx(oracle::naive_ks(x, [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); }))
              .epsilon(1e-12));
  }
}

TEST_CASE("ks p-value decreases with the statistic") {
  double prev = 1.0;
  for (double lambda = 0.2; lambda < 3.0; lambda += 0.01) {
    const double s = kolmogorov_survival(lambda);
    CHECK(s <= prev + 1e-15);
    CHECK(s >= 0.0);
    prev = s;
  }
  // classical critical values
  CHECK(kolmogorov_survival(1.3581) == Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == Approx(0.01).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.17) == Approx(kolmogorov_survival(1.19)).epsilon(0.05));
}

TEST_CASE("ks null calibration") {
  int passes = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomStream rng(seed);
    VectorXd x(1000);
    for (auto& v : x) v = rng.normal();
    passes += ks_test_normal(standardize(x)).p_value >= 0.01 ? 1 : 0;
  }
  CHECK(passes >= 98);
}

TEST_CASE("random streams") {
  RandomStream a(42);
  RandomStream b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(label_key("fold") != label_key("fold2"));

  RandomStream r(7);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
  for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
  double chi = 0.0;
  for (int i = 0; i < 20000; ++i) chi += r.chi_square(5.0);
  CHECK(chi / 20000 == Approx(5.0).epsilon(0.03));
}
