#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "s2t/matrix.hpp"

namespace s2t {

// Residue image of a rational matrix mod a fixed prime. Entry maps are ring
// homomorphisms on the subring of rationals whose denominators are coprime to
// the prime, so images multiply like the exact matrices. An image mismatch
// proves exact inequality; image equality is only ever a hint and every
// consumer confirms with exact arithmetic before concluding equality.
inline constexpr std::uint64_t kScreenPrime = 2305843009213693951ULL;  // 2^61 - 1

class ModMatrix {
 public:
  ModMatrix() : n_(0) {}
  explicit ModMatrix(std::size_t n) : n_(n), e_(n * n, 0) {}

  static ModMatrix reduce(const RationalMatrix& m, std::uint64_t p = kScreenPrime) {
    ModMatrix r(m.n());
    for (std::size_t i = 0; i < m.n(); ++i)
      for (std::size_t j = 0; j < m.n(); ++j) r.at(i, j) = m.at(i, j).residue(p);
    return r;
  }

  static ModMatrix identity(std::size_t n) {
    ModMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t n() const { return n_; }
  std::uint64_t& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
  std::uint64_t at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

  friend bool operator==(const ModMatrix& a, const ModMatrix& b) {
    return a.n_ == b.n_ && a.e_ == b.e_;
  }
  friend bool operator!=(const ModMatrix& a, const ModMatrix& b) { return !(a == b); }

  ModMatrix operator*(const ModMatrix& o) const {
    ModMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        std::uint64_t aik = at(i, k);
        if (!aik) continue;
        for (std::size_t j = 0; j < n_; ++j) {
          unsigned __int128 s = r.at(i, j);
          s += static_cast<unsigned __int128>(aik) * o.at(k, j);
          r.at(i, j) = static_cast<std::uint64_t>(s % kScreenPrime);
        }
      }
    return r;
  }

  std::vector<std::uint64_t> apply(const std::vector<std::uint64_t>& v) const {
    std::vector<std::uint64_t> r(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      unsigned __int128 s = 0;
      for (std::size_t j = 0; j < n_; ++j)
        s += static_cast<unsigned __int128>(at(i, j)) * v[j];
      r[i] = static_cast<std::uint64_t>(s % kScreenPrime);
    }
    return r;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (at(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ULL ^ n_;
    for (std::uint64_t x : e_) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return h;
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> e_;
};

// Gauss-Jordan over F_p; group elements have det 1 so this never fails for
// them, but the nullopt path is kept for stray callers.
inline std::optional<ModMatrix> mod_inverse(const ModMatrix& m) {
  const std::uint64_t p = kScreenPrime;
  std::size_t n = m.n();
  std::vector<std::vector<std::uint64_t>> a(n, std::vector<std::uint64_t>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j);
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && a[sel][c] == 0) ++sel;
    if (sel == n) return std::nullopt;
    std::swap(a[sel], a[c]);
    std::uint64_t inv = detail::powmod_u64(a[c][c], p - 2, p);
    for (std::size_t j = 0; j < 2 * n; ++j) a[c][j] = detail::mulmod_u64(a[c][j], inv, p);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      std::uint64_t f = a[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) {
        std::uint64_t sub = detail::mulmod_u64(f, a[c][j], p);
        a[i][j] = (a[i][j] + p - sub) % p;
      }
    }
  }
  ModMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.at(i, j) = a[i][n + j];
  return r;
}

}  // namespace s2t
