#include "copath/stats.hpp"

#include <numbers>

#include "copath/distributions.hpp"

namespace copath {

MatrixXd pearson_correlation(const Dataset& data) {
  return pearson_correlation(data.values());
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double value;
  if (lambda < 1.18) {
    // Jacobi-theta form converges quickly for small lambda.
    const double y = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double k = 2.0 * j - 1.0;
      sum += std::exp(-k * k * y);
    }
    value = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
  } else {
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
      const double term = std::exp(-2.0 * j * j * lambda * lambda);
      sum += (j % 2 == 1 ? term : -term);
      if (term < 1e-18) break;
    }
    value = 2.0 * sum;
  }
  return std::clamp(value, 0.0, 1.0);
}

KsResult ks_test_normal(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 8)
    fail(Errc::TooFewObservations,
         "ks_test_normal: need at least 8 observations, got " + std::to_string(n));
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double dn = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = std_normal_cdf(sorted[i]);
    d = std::max({d, (i + 1) / dn - f, f - i / dn});
  }
  const double sqrt_n = std::sqrt(dn);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  return KsResult{d, kolmogorov_survival(lambda), n};
}

}  // namespace copath
