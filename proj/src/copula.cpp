#include "copath/copula.hpp"

#include <algorithm>
#include <cmath>

#include "copath/distributions.hpp"
#include "copath/rng.hpp"

namespace copath {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kCorrelationTolerance = 1e-10;
}  // namespace

CorrelationMatrix::CorrelationMatrix(const MatrixXd& m) : m_(m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(Errc::DimensionMismatch, "correlation matrix must be square and non-empty");
  if (!m.allFinite()) fail(Errc::Domain, "correlation matrix has non-finite entries");
  if (!is_symmetric(m, kCorrelationTolerance))
    fail(Errc::Domain, "correlation matrix is not symmetric");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m(i, i) - 1.0) > kCorrelationTolerance)
      fail(Errc::Domain, "correlation matrix diagonal must be 1");
    m_(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      if (!(std::abs(v) < 1.0))
        fail(Errc::NotPositiveDefinite, "correlation entry (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") outside (-1, 1)");
      m_(i, j) = m_(j, i) = v;
    }
  }
  l_ = cholesky(m_);
}

CorrelationMatrix CorrelationMatrix::identity(Eigen::Index dim) {
  return CorrelationMatrix(MatrixXd::Identity(dim, dim));
}

EmpiricalMarginal::EmpiricalMarginal(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.size() < 2) fail(Errc::Domain, "empirical marginal needs at least two values");
  for (double v : sorted_)
    if (!std::isfinite(v)) fail(Errc::Domain, "empirical marginal has non-finite values");
  std::sort(sorted_.begin(), sorted_.end());
}

void validate(const MarginalModel& m) {
  std::visit(overloaded{
                 [](const StandardNormalMarginal&) {},
                 [](const NormalMarginal& n) {
                   if (!(n.sd > 0.0) || !std::isfinite(n.mean))
                     fail(Errc::Domain, "normal marginal needs sd > 0");
                 },
                 [](const StudentTMarginal& t) {
                   if (!(t.nu > 0.0) || !(t.scale > 0.0) || !std::isfinite(t.location))
                     fail(Errc::Domain, "t marginal needs nu > 0 and scale > 0");
                 },
                 [](const EmpiricalMarginal&) {},
             },
             m);
}

double marginal_cdf(const MarginalModel& m, double x) {
  return std::visit(
      overloaded{
          [&](const StandardNormalMarginal&) { return std_normal_cdf(x); },
          [&](const NormalMarginal& n) { return std_normal_cdf((x - n.mean) / n.sd); },
          [&](const StudentTMarginal& t) { return student_t_cdf((x - t.location) / t.scale, t.nu); },
          [&](const EmpiricalMarginal& e) {
            const auto& s = e.sorted();
            if (x < s.front()) return 0.0;
            if (x >= s.back()) return 1.0;
            // last index j with s[j] <= x; s[j + 1] > x
            const auto it = std::upper_bound(s.begin(), s.end(), x);
            const auto j = static_cast<std::size_t>(it - s.begin()) - 1;
            const double frac = (x - s[j]) / (s[j + 1] - s[j]);
            return (static_cast<double>(j) + frac) / static_cast<double>(s.size() - 1);
          },
      },
      m);
}

double marginal_quantile(const MarginalModel& m, double p) {
  if (!(p > 0.0 && p < 1.0))
    fail(Errc::Domain, "marginal_quantile: probability must lie in (0, 1)");
  return std::visit(
      overloaded{
          [&](const StandardNormalMarginal&) { return std_normal_quantile(p); },
          [&](const NormalMarginal& n) { return n.mean + n.sd * std_normal_quantile(p); },
          [&](const StudentTMarginal& t) {
            return t.location + t.scale * student_t_quantile(p, t.nu);
          },
          [&](const EmpiricalMarginal& e) {
            const auto& s = e.sorted();
            const double h = static_cast<double>(s.size() - 1) * p;
            const auto lo = static_cast<std::size_t>(std::floor(h));
            if (lo + 1 >= s.size()) return s.back();
            return s[lo] + (h - static_cast<double>(lo)) * (s[lo + 1] - s[lo]);
          },
      },
      m);
}

double marginal_mean(const MarginalModel& m) {
  return std::visit(overloaded{
                        [](const StandardNormalMarginal&) { return 0.0; },
                        [](const NormalMarginal& n) { return n.mean; },
                        [](const StudentTMarginal& t) {
                          if (!(t.nu > 1.0)) fail(Errc::Domain, "t marginal mean needs nu > 1");
                          return t.location;
                        },
                        [](const EmpiricalMarginal& e) {
                          double sum = 0.0;
                          for (double v : e.sorted()) sum += v;
                          return sum / static_cast<double>(e.sorted().size());
                        },
                    },
                    m);
}

std::string family_name(const CopulaFamily& family) {
  return std::visit(overloaded{
                        [](const GaussianFamily&) { return std::string("gaussian"); },
                        [](const StudentTFamily& t) { return "t(" + std::to_string(t.nu) + ")"; },
                    },
                    family);
}

std::vector<std::string> default_names(Eigen::Index p) {
  std::vector<std::string> names{"y"};
  for (Eigen::Index i = 1; i <= p; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

CopulaSpec::CopulaSpec(CopulaFamily family_, CorrelationMatrix sigma_,
                       std::vector<MarginalModel> marginals_, std::vector<std::string> names_)
    : family(family_), sigma(std::move(sigma_)), marginals(std::move(marginals_)),
      names(std::move(names_)) {
  if (static_cast<Eigen::Index>(marginals.size()) != sigma.dim())
    fail(Errc::DimensionMismatch, "copula spec: marginal count must equal matrix dimension");
  if (sigma.dim() < 2) fail(Errc::DimensionMismatch, "copula spec needs Y and at least one X");
  if (names.empty()) names = default_names(sigma.dim() - 1);
  if (static_cast<Eigen::Index>(names.size()) != sigma.dim())
    fail(Errc::DimensionMismatch, "copula spec: name count must equal matrix dimension");
  if (auto* t = std::get_if<StudentTFamily>(&family); t && !(t->nu > 0.0))
    fail(Errc::Domain, "t copula needs nu > 0");
  for (const auto& m : marginals) validate(m);
}

CorrelationPartition partition(const CorrelationMatrix& sigma) {
  const Eigen::Index p = sigma.dim() - 1;
  if (p < 1) fail(Errc::DimensionMismatch, "partition: need at least one exogenous variable");
  VectorXd rho = sigma.matrix().col(0).tail(p);
  MatrixXd sx = sigma.matrix().bottomRightCorner(p, p);
  return {std::move(rho), CorrelationMatrix(sx)};
}

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

namespace {

// Maps a latent coordinate to the data scale, skipping the CDF/quantile round
// trip when the composition is affine.
double latent_to_data(const CopulaFamily& family, const MarginalModel& m, double latent) {
  if (std::holds_alternative<GaussianFamily>(family)) {
    if (std::holds_alternative<StandardNormalMarginal>(m)) return latent;
    if (auto* n = std::get_if<NormalMarginal>(&m)) return n->mean + n->sd * latent;
    return marginal_quantile(m, clamp_probability(std_normal_cdf(latent)));
  }
  const double nu = std::get<StudentTFamily>(family).nu;
  if (auto* t = std::get_if<StudentTMarginal>(&m); t && t->nu == nu)
    return t->location + t->scale * latent;
  return marginal_quantile(m, clamp_probability(student_t_cdf(latent, nu)));
}

}  // namespace

Dataset sample(const CopulaSpec& spec, Eigen::Index n, std::uint64_t seed) {
  if (n < 2) fail(Errc::Domain, "sample: need n >= 2");
  const Eigen::Index d = spec.sigma.dim();
  const MatrixXd& l = spec.sigma.cholesky_factor();
  const auto* t = std::get_if<StudentTFamily>(&spec.family);

  RandomStream rng(seed);
  MatrixXd out(n, d);
  VectorXd z(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
    VectorXd latent = l * z;
    if (t) latent *= std::sqrt(t->nu / rng.chi_square(t->nu));
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = latent_to_data(spec.family, spec.marginals[static_cast<std::size_t>(j)], latent(j));
  }
  return Dataset(spec.names, std::move(out));
}

double gaussian_copula_density(const VectorXd& u, const CorrelationMatrix& sigma) {
  if (u.size() != sigma.dim())
    fail(Errc::DimensionMismatch, "gaussian_copula_density: dimension mismatch");
  VectorXd q(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) q(i) = std_normal_quantile(u(i));
  const MatrixXd& l = sigma.cholesky_factor();
  const VectorXd w = l.triangularView<Eigen::Lower>().solve(q);
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  return std::exp(-0.5 * log_det - 0.5 * (w.squaredNorm() - q.squaredNorm()));
}

}  // namespace copath
