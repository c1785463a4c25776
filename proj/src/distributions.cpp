#include "copath/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "copath/error.hpp"

namespace copath {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double as241(double p) {
  const double q = p - 0.5;
  if (std::abs(q) < 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r < 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return std::copysign(val, q);
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 100000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

double log_beta(double a, double b) {
  if (b == 0.5) return std::lgamma(0.5) - log_gamma_ratio_half(a);
  if (a == 0.5) return std::lgamma(0.5) - log_gamma_ratio_half(b);
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

void check_nu(double nu, const char* where) {
  if (!(nu > 0.0) || std::isnan(nu))
    fail(Errc::Domain, std::string(where) + ": degrees of freedom must be positive");
}

void check_probability(double p, const char* where) {
  if (!(p > 0.0 && p < 1.0))
    fail(Errc::Domain, std::string(where) + ": probability must lie in (0, 1), got " +
                           std::to_string(p));
}

// Lower-tail probability P(T <= -|x|).
double student_t_lower_tail(double x, double nu) {
  const double t2 = x * x;
  const double denom = nu + t2;
  return 0.5 * incomplete_beta(0.5 * nu, 0.5, nu / denom, t2 / denom);
}

}  // namespace

double log_gamma_ratio_half(double a) {
  if (a >= 20.0) {
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    return 0.5 * std::log(a) -
           inv * (1.0 / 8.0 - inv2 * (1.0 / 192.0 - inv2 * (1.0 / 640.0 - inv2 * 17.0 / 14336.0)));
  }
  return std::lgamma(a + 0.5) - std::lgamma(a);
}

double incomplete_beta(double a, double b, double x, double one_minus_x) {
  if (x <= 0.0) return 0.0;
  if (one_minus_x <= 0.0) return 1.0;
  const double log_front =
      a * std::log(x) + b * std::log(one_minus_x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, one_minus_x) / b;
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  check_probability(p, "std_normal_quantile");
  double x = as241(p);
  // Newton step on the tail that keeps relative precision.
  const double pdf = std_normal_pdf(x);
  if (pdf > 0.0) {
    const double err = p < 0.5 ? std_normal_cdf(x) - p : (1.0 - p) - std_normal_cdf(-x);
    x -= err / pdf;
  }
  return x;
}

double student_t_pdf(double x, double nu) {
  check_nu(nu, "student_t_pdf");
  const double log_norm =
      log_gamma_ratio_half(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double student_t_cdf(double x, double nu) {
  check_nu(nu, "student_t_cdf");
  if (std::isnan(x)) fail(Errc::Domain, "student_t_cdf: NaN argument");
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double lower = student_t_lower_tail(x, nu);
  return x < 0.0 ? lower : 1.0 - lower;
}

double student_t_quantile(double p, double nu) {
  check_probability(p, "student_t_quantile");
  check_nu(nu, "student_t_quantile");
  if (p == 0.5) return 0.0;
  // Solve on the lower tail and reflect.
  const bool upper = p > 0.5;
  const double tail = upper ? 1.0 - p : p;
  if (nu == 1.0) {
    const double t = std::tan(std::numbers::pi * (tail - 0.5));
    return upper ? -t : t;
  }

  // Cornish-Fisher start from the normal quantile.
  const double z = std_normal_quantile(tail);
  double t = z + (z * z * z + z) / (4.0 * nu) +
             (5.0 * std::pow(z, 5) + 16.0 * z * z * z + 3.0 * z) / (96.0 * nu * nu);
  if (!std::isfinite(t) || t >= 0.0) t = z;

  auto f = [&](double v) { return student_t_lower_tail(v, nu) - tail; };

  // Bracket [lo, hi] with f(lo) < 0 < f(hi), both negative abscissae.
  double hi = std::min(t, -1e-300);
  double lo = hi;
  if (f(hi) < 0.0) {
    lo = hi;
    hi = 0.0;
  } else {
    double step = std::max(1.0, std::abs(hi));
    lo = hi - step;
    while (f(lo) > 0.0) {
      hi = lo;
      step *= 2.0;
      lo -= step;
      if (!std::isfinite(lo)) fail(Errc::Domain, "student_t_quantile: bracketing failed");
    }
  }
  if (t <= lo || t >= hi) t = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double fv = f(t);
    if (fv == 0.0) break;
    if (fv < 0.0) lo = t; else hi = t;
    const double pdf = student_t_pdf(t, nu);
    double next = pdf > 0.0 ? t - fv / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double delta = std::abs(next - t);
    t = next;
    if (delta <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t)) break;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(lo)) break;
  }
  return upper ? -t : t;
}

}  // namespace copath
