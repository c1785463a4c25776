#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace copath {

std::uint64_t splitmix64(std::uint64_t x);

/// Stable 64-bit hash of a label, for use as a stream-derivation key.
constexpr std::uint64_t label_key(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives an independent child seed from `base` and a key path, e.g.
/// derive_seed(seed, {label_key("rep"), rep, label_key("fold"), fold}).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Seeded random stream. Uniform and normal draws are bit-reproducible
/// across platforms; chi-square draws go through std::gamma_distribution.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double chi_square(double df);
  double student_t(double df);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace copath
