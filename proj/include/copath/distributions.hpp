#pragma once

namespace copath {

double std_normal_pdf(double x);

/// Standard normal CDF, computed through erfc so that both tails keep full
/// relative precision.
double std_normal_cdf(double x);

/// Inverse standard normal CDF (Wichura AS 241, polished with one Newton step).
/// Throws Errc::Domain unless 0 < p < 1.
double std_normal_quantile(double p);

double student_t_pdf(double x, double nu);
double student_t_cdf(double x, double nu);
double student_t_quantile(double p, double nu);

/// log(Gamma(a + 1/2) / Gamma(a)) without the cancellation of two lgamma calls.
double log_gamma_ratio_half(double a);

/// Regularized incomplete beta I_x(a, b). `one_minus_x` is passed separately
/// so callers can supply it without cancellation.
double incomplete_beta(double a, double b, double x, double one_minus_x);

}  // namespace copath
