#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace s2t {

// Exact rational with a maintained canonical form: lowest terms, positive
// denominator, zero stored as 0/1. GMP does not canonicalize values built
// from a raw numerator/denominator pair, so every constructor here does.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit on purpose, matches int literals
  Rational(long n, long d) : v_(n, d) { canon_(); }
  explicit Rational(const mpz_class& n) : v_(n) {}
  Rational(const mpz_class& n, const mpz_class& d) : v_(n, d) { canon_(); }
  explicit Rational(const mpq_class& q) : v_(q) { canon_(); }

  // Accepts "p", "-p", "p/q"; rejects anything else (including whitespace).
  static Rational parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rational-parse: empty string");
    for (char c : s)
      if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
        throw std::invalid_argument("rational-parse: bad character in '" + s + "'");
    mpq_class q;
    if (q.set_str(s, 10) != 0)
      throw std::invalid_argument("rational-parse: malformed '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("rational-parse: zero denominator in '" + s + "'");
    return Rational(q);
  }

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  // "p" when integral, "p/q" otherwise; this is the canonical string form
  // used by every serialization.
  std::string str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  Rational operator-() const { return from_canonical_(-v_); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  Rational inv() const {
    if (is_zero()) throw std::domain_error("rational: inverse of zero");
    return from_canonical_(1 / v_);
  }

  const mpq_class& raw() const { return v_; }

  // Residue num * den^-1 mod p. Caller guarantees p does not divide den
  // (checked; throws otherwise so a bad prime choice is loud, not wrong).
  std::uint64_t residue(std::uint64_t p) const;

 private:
  static Rational from_canonical_(const mpq_class& q) {
    Rational r;
    r.v_ = q;
    return r;
  }
  void canon_() {
    if (v_.get_den() == 0) throw std::domain_error("rational: zero denominator");
    v_.canonicalize();
  }
  mpq_class v_;
};

namespace detail {
inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, p);
    b = mulmod_u64(b, b, p);
    e >>= 1;
  }
  return r;
}
}  // namespace detail

inline std::uint64_t Rational::residue(std::uint64_t p) const {
  std::uint64_t n = mpz_fdiv_ui(v_.get_num().get_mpz_t(), p);
  std::uint64_t d = mpz_fdiv_ui(v_.get_den().get_mpz_t(), p);
  if (d == 0) throw std::domain_error("rational: denominator not invertible mod p");
  return detail::mulmod_u64(n, detail::powmod_u64(d, p - 2, p), p);
}

inline Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

}  // namespace s2t
