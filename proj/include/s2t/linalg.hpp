#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "s2t/matrix.hpp"

namespace s2t {

// v != 0 and M v parallel to v, tested entrywise as (Mv)_i v_j = (Mv)_j v_i.
inline bool is_eigenvector(const RationalMatrix& m, const Vec& v) {
  if (is_zero_vec(v)) throw std::invalid_argument("is_eigenvector: zero vector");
  Vec w = m.apply(v);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (w[i] * v[j] != w[j] * v[i]) return false;
  return true;
}

// Parallel test for two (possibly zero) vectors: w ^ v = 0.
inline bool parallel(const Vec& w, const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (w[i] * v[j] != w[j] * v[i]) return false;
  return true;
}

// If M restricted to span(basis) is lambda * id, returns lambda; otherwise
// nullopt. Zero counts: M killing all of the span returns lambda = 0, killing
// part of it returns nullopt. The basis must be independent.
inline std::optional<Rational> scalar_on_subspace(const RationalMatrix& m,
                                                  const std::vector<Vec>& basis) {
  if (basis.empty()) throw std::invalid_argument("invalid-basis: empty");
  if (rank_of(basis) != basis.size()) throw std::invalid_argument("invalid-basis: dependent");
  std::optional<Rational> lambda;
  for (const Vec& w : basis) {
    Vec mw = m.apply(w);
    if (!parallel(mw, w)) return std::nullopt;
    // extract the ratio on the first nonzero coordinate of w
    Rational lam(0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!w[i].is_zero()) {
        lam = mw[i] / w[i];
        break;
      }
    }
    if (lambda && *lambda != lam) return std::nullopt;
    lambda = lam;
  }
  return lambda;
}

// r+1 vectors in r-dimensional position: every subset of size i <= r spans
// an i-dimensional space. Equivalent to all size-r subsets being bases, which
// is what gets checked (subsets of independent sets are independent).
inline bool general_position(const std::vector<Vec>& vecs) {
  if (vecs.empty()) throw std::invalid_argument("general_position: empty family");
  std::size_t r = vecs[0].size();
  if (vecs.size() != r + 1)
    throw std::invalid_argument("general_position: need exactly r+1 vectors");
  for (std::size_t omit = 0; omit < vecs.size(); ++omit) {
    std::vector<Vec> sub;
    sub.reserve(r);
    for (std::size_t i = 0; i < vecs.size(); ++i)
      if (i != omit) sub.push_back(vecs[i]);
    if (rank_of(std::move(sub)) != r) return false;
  }
  return true;
}

// A matrix with r+1 eigenvectors in general position is scalar; this returns
// the forced lambda when every vector is an eigenvector, nullopt otherwise.
inline std::optional<Rational> scalar_from_eigenvectors(const RationalMatrix& b,
                                                        const std::vector<Vec>& vecs) {
  if (!general_position(vecs))
    throw std::invalid_argument("general_position: family is degenerate");
  for (const Vec& v : vecs)
    if (!is_eigenvector(b, v)) return std::nullopt;
  // all eigenvectors: the matrix must be scalar, and the diagonal carries it
  Rational lam = b.at(0, 0);
  if (!b.is_scalar())
    throw std::logic_error("scalar_from_eigenvectors: eigenvector family in general "
                           "position on a non-scalar matrix");
  return lam;
}

}  // namespace s2t
