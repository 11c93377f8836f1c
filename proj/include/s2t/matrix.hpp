#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "s2t/rational.hpp"

namespace s2t {

using Vec = std::vector<Rational>;

inline Rational dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational norm_sq(const Vec& a) { return dot(a, a); }

inline bool is_zero_vec(const Vec& a) {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

// Square matrix over Q, row-major. Group elements are always square; the
// rectangular cases (kernel bases, rank of vector families) go through the
// free functions below, which work on rows directly.
class RationalMatrix {
 public:
  RationalMatrix() : n_(0) {}
  explicit RationalMatrix(std::size_t n) : n_(n), e_(n * n) {}
  RationalMatrix(std::size_t n, std::vector<Rational> entries) : n_(n), e_(std::move(entries)) {
    if (e_.size() != n_ * n_) throw std::invalid_argument("matrix: entry count mismatch");
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
  }

  std::size_t n() const { return n_; }
  Rational& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
  const std::vector<Rational>& entries() const { return e_; }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.n_ == b.n_ && a.e_ == b.e_;
  }
  friend bool operator!=(const RationalMatrix& a, const RationalMatrix& b) { return !(a == b); }

  RationalMatrix operator*(const RationalMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("matrix: dimension mismatch");
    RationalMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        const Rational& aik = at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < n_; ++j) {
          const Rational& bkj = o.at(k, j);
          if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
        }
      }
    return r;
  }

  RationalMatrix operator+(const RationalMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("matrix: dimension mismatch");
    RationalMatrix r(n_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
  }

  RationalMatrix operator-(const RationalMatrix& o) const {
    if (n_ != o.n_) throw std::invalid_argument("matrix: dimension mismatch");
    RationalMatrix r(n_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
  }

  RationalMatrix scaled(const Rational& c) const {
    RationalMatrix r(n_);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * c;
    return r;
  }

  Vec apply(const Vec& v) const {
    if (v.size() != n_) throw std::invalid_argument("matrix: vector size mismatch");
    Vec r(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Rational s;
      for (std::size_t j = 0; j < n_; ++j)
        if (!at(i, j).is_zero() && !v[j].is_zero()) s += at(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  RationalMatrix transpose() const {
    RationalMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i == j ? !at(i, j).is_one() : !at(i, j).is_zero()) return false;
    return true;
  }

  // lambda*I for some lambda (including 0 and 1).
  bool is_scalar() const {
    if (n_ == 0) return true;
    const Rational& lam = at(0, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i == j ? at(i, j) != lam : !at(i, j).is_zero()) return false;
    return true;
  }

  Vec row(std::size_t i) const {
    Vec r(n_);
    for (std::size_t j = 0; j < n_; ++j) r[j] = at(i, j);
    return r;
  }
  Vec col(std::size_t j) const {
    Vec c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = at(i, j);
    return c;
  }

 private:
  std::size_t n_;
  std::vector<Rational> e_;
};

inline RationalMatrix from_columns(const std::vector<Vec>& cols) {
  if (cols.empty()) throw std::invalid_argument("from_columns: empty");
  std::size_t n = cols[0].size();
  if (cols.size() != n) throw std::invalid_argument("from_columns: not square");
  RationalMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (cols[j].size() != n) throw std::invalid_argument("from_columns: ragged");
    for (std::size_t i = 0; i < n; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

namespace detail {

// In-place reduced row echelon form; returns pivot column indices.
// Pivot rule: first row with a nonzero entry in the leftmost open column,
// so the result is deterministic and canonical.
inline std::vector<std::size_t> rref(std::vector<Vec>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t sel = rank;
    while (sel < rows.size() && rows[sel][c].is_zero()) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    Rational inv = rows[rank][c].inv();
    for (std::size_t j = c; j < cols; ++j) rows[rank][j] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][c].is_zero()) continue;
      Rational f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank_of(std::vector<Vec> rows) { return detail::rref(rows).size(); }

inline std::size_t rank_of(const RationalMatrix& m) {
  std::vector<Vec> rows;
  rows.reserve(m.n());
  for (std::size_t i = 0; i < m.n(); ++i) rows.push_back(m.row(i));
  return rank_of(std::move(rows));
}

// Canonical basis of the solution space of M x = 0 (free-variable
// parametrization of the RREF, in increasing free-column order).
inline std::vector<Vec> kernel_basis(const RationalMatrix& m) {
  std::size_t n = m.n();
  std::vector<Vec> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(m.row(i));
  std::vector<std::size_t> pivots = detail::rref(rows);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vec v(n);
    v[f] = Rational(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline Rational det(const RationalMatrix& m) {
  std::size_t n = m.n();
  std::vector<Vec> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(m.row(i));
  Rational d(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && rows[sel][c].is_zero()) ++sel;
    if (sel == n) return Rational(0);
    if (sel != c) {
      std::swap(rows[sel], rows[c]);
      d = -d;
    }
    d *= rows[c][c];
    Rational inv = rows[c][c].inv();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (rows[i][c].is_zero()) continue;
      Rational f = rows[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) rows[i][j] -= f * rows[c][j];
    }
  }
  return d;
}

inline std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  std::size_t n = m.n();
  std::vector<Vec> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec r(2 * n);
    for (std::size_t j = 0; j < n; ++j) r[j] = m.at(i, j);
    r[n + i] = Rational(1);
    rows.push_back(std::move(r));
  }
  std::vector<std::size_t> pivots = detail::rref(rows);
  if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
  RationalMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = rows[i][n + j];
  return inv;
}

// True iff w lies in the span of the given vectors.
inline bool in_span(const Vec& w, const std::vector<Vec>& vecs) {
  std::size_t r0 = rank_of(vecs);
  std::vector<Vec> ext = vecs;
  ext.push_back(w);
  return rank_of(std::move(ext)) == r0;
}

inline std::string to_string(const RationalMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.n(); ++i) {
    s += i ? "; " : "";
    for (std::size_t j = 0; j < m.n(); ++j) s += (j ? " " : "") + m.at(i, j).str();
  }
  return s + "]";
}

}  // namespace s2t
