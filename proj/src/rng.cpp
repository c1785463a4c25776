#include "copath/rng.hpp"

#include <cmath>

#include "copath/distributions.hpp"
#include "copath/error.hpp"

namespace copath {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t k : path) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

double RandomStream::uniform() {
  // 53 random bits, centred in their bucket so 0 and 1 are never produced.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return std_normal_quantile(uniform()); }

double RandomStream::chi_square(double df) {
  if (!(df > 0.0)) fail(Errc::Domain, "chi_square: degrees of freedom must be positive");
  std::gamma_distribution<double> gamma(0.5 * df, 2.0);
  return gamma(engine_);
}

double RandomStream::student_t(double df) {
  const double z = normal();
  return z / std::sqrt(chi_square(df) / df);
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  if (bound == 0) fail(Errc::Domain, "below: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % bound;
}

}  // namespace copath
