#pragma once

#include <stdexcept>

#include "s2t/matrix.hpp"

namespace s2t {

// Scale so the first nonzero coordinate is 1; rejects the zero vector.
inline Vec projective_canon(Vec v) {
  std::size_t k = 0;
  while (k < v.size() && v[k].is_zero()) ++k;
  if (k == v.size()) throw std::invalid_argument("projective: zero vector");
  Rational inv = v[k].inv();
  for (auto& x : v) x *= inv;
  return v;
}

class ProjectivePoint {
 public:
  explicit ProjectivePoint(Vec v) : v_(projective_canon(std::move(v))) {}

  const Vec& rep() const { return v_; }
  std::size_t dim() const { return v_.size(); }

  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const ProjectivePoint& a, const ProjectivePoint& b) {
    return !(a == b);
  }

 private:
  Vec v_;
};

// Hyperplane as a canonical normal covector: the point set {x : <normal,x> = 0}.
class ProjectiveHyperplane {
 public:
  explicit ProjectiveHyperplane(Vec normal) : nrm_(projective_canon(std::move(normal))) {}

  // Span of n-1 independent vectors; the kernel of the stacked rows is the
  // normal direction.
  static ProjectiveHyperplane through(const std::vector<Vec>& span) {
    if (span.empty()) throw std::invalid_argument("hyperplane: empty span");
    std::size_t n = span[0].size();
    if (span.size() != n - 1) throw std::invalid_argument("hyperplane: need n-1 spanning vectors");
    RationalMatrix m(n);
    for (std::size_t i = 0; i < n - 1; ++i)
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = span[i][j];
    std::vector<Vec> ker = kernel_basis(m);
    if (ker.size() != 1) throw std::invalid_argument("hyperplane: spanning vectors dependent");
    return ProjectiveHyperplane(std::move(ker[0]));
  }

  const Vec& normal() const { return nrm_; }

  bool contains(const ProjectivePoint& p) const { return dot(nrm_, p.rep()).is_zero(); }
  bool contains_vec(const Vec& v) const { return dot(nrm_, v).is_zero(); }

  friend bool operator==(const ProjectiveHyperplane& a, const ProjectiveHyperplane& b) {
    return a.nrm_ == b.nrm_;
  }

 private:
  Vec nrm_;
};

inline ProjectivePoint apply(const RationalMatrix& m, const ProjectivePoint& p) {
  return ProjectivePoint(m.apply(p.rep()));
}

// Squared projective distance: |v ^ w|^2 / (|v|^2 |w|^2), computed through the
// Lagrange identity so no square roots appear. Symmetric, zero iff equal, and
// at most 1.
inline Rational proj_distance_sq(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("proj_distance_sq: dimension mismatch");
  Rational na = norm_sq(a.rep());
  Rational nb = norm_sq(b.rep());
  Rational d = dot(a.rep(), b.rep());
  return (na * nb - d * d) / (na * nb);
}

// Distance from a point to a hyperplane, squared: <n,v>^2 / (|n|^2 |v|^2).
// Zero iff the point lies on the hyperplane.
inline Rational proj_distance_sq(const ProjectivePoint& a, const ProjectiveHyperplane& h) {
  if (a.dim() != h.normal().size())
    throw std::invalid_argument("proj_distance_sq: dimension mismatch");
  Rational d = dot(h.normal(), a.rep());
  return (d * d) / (norm_sq(h.normal()) * norm_sq(a.rep()));
}

inline bool in_neighborhood(const ProjectivePoint& x, const ProjectivePoint& center,
                            const Rational& eps_sq) {
  return proj_distance_sq(x, center) < eps_sq;
}

inline bool in_neighborhood(const ProjectivePoint& x, const ProjectiveHyperplane& h,
                            const Rational& eps_sq) {
  return proj_distance_sq(x, h) < eps_sq;
}

}  // namespace s2t
