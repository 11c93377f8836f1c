#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "s2t/matrix.hpp"

namespace s2t {

// Deterministic RNG. mt19937_64 output is pinned by the standard and the
// derived draws below avoid std::uniform_int_distribution (whose mapping is
// implementation-defined), so identical seeds give identical streams on any
// conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [lo, hi] by rejection, bias-free
  long uniform(long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("rng: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<long>(next());  // full 64-bit range
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
  }

  // height-bounded rational: numerator in [-h, h], denominator in [1, h]
  Rational rational(long height) {
    return Rational(uniform(-height, height), uniform(1, height));
  }

  Rational nonzero_rational(long height) {
    for (;;) {
      Rational r = rational(height);
      if (!r.is_zero()) return r;
    }
  }

  Vec vector(std::size_t n, long height) {
    Vec v(n);
    for (auto& x : v) x = rational(height);
    return v;
  }

  Vec nonzero_vector(std::size_t n, long height) {
    for (;;) {
      Vec v = vector(n, height);
      if (!is_zero_vec(v)) return v;
    }
  }

 private:
  std::mt19937_64 eng_;
};

// Stable sub-seed derivation: FNV over the tag, mixed with the master seed
// and counter by splitmix64 steps. Every search records the sub-seed it used.
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& tag,
                                 std::uint64_t counter = 0) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::uint64_t z = master ^ h ^ (counter * 0x9E3779B97F4A7C15ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace s2t
