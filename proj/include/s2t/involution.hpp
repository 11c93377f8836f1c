#pragma once

#include <stdexcept>
#include <vector>

#include "s2t/errors.hpp"
#include "s2t/matrix.hpp"

namespace s2t {

// Raw averaging projector (1 + t)/2. Exposed separately from the validated
// Involution type so degenerate inputs (t = -I gives the zero map) can still
// be exercised.
inline RationalMatrix projector_matrix(const RationalMatrix& t) {
  return (RationalMatrix::identity(t.n()) + t).scaled(Rational(1, 2));
}

// Involution with its eigenspace split. Validates t^2 = I, t != +-I (scalars
// are rejected upstream: they fix everything and carry no split), and even
// dimension of the -1 eigenspace, which is exactly det(t) = 1.
class Involution {
 public:
  static Involution make(const RationalMatrix& t) {
    if (t.n() == 0) throw InputError("invalid-involution: empty matrix");
    if (!(t * t).is_identity())
      throw InputError("invalid-involution: square is not the identity");
    if (t.is_scalar()) throw InputError("invalid-involution: scalar matrix");
    Involution v;
    v.t_ = t;
    RationalMatrix id = RationalMatrix::identity(t.n());
    v.w_plus_ = kernel_basis(t - id);
    v.w_minus_ = kernel_basis(t + id);
    if (v.w_plus_.size() + v.w_minus_.size() != t.n())
      throw InputError("invalid-involution: eigenspaces do not split the space");
    if (v.w_minus_.size() % 2 != 0)
      throw InputError(
          "invalid-involution: odd-dimensional -1 eigenspace (determinant -1)");
    return v;
  }

  const RationalMatrix& matrix() const { return t_; }
  std::size_t n() const { return t_.n(); }
  const std::vector<Vec>& w_plus() const { return w_plus_; }
  const std::vector<Vec>& w_minus() const { return w_minus_; }
  std::size_t r() const { return w_plus_.size(); }

  RationalMatrix projector() const { return projector_matrix(t_); }

 private:
  Involution() = default;
  RationalMatrix t_;
  std::vector<Vec> w_plus_, w_minus_;
};

// Projection with named image so callers can iterate an image basis without
// recomputing kernels. Built from an involution in every production path.
struct Projector {
  RationalMatrix matrix;
  std::vector<Vec> image;   // basis of im(P)
  std::vector<Vec> kernel;  // basis of ker(P)

  static Projector from_involution(const Involution& t) {
    Projector p;
    p.matrix = t.projector();
    p.image = t.w_plus();
    p.kernel = t.w_minus();
    return p;
  }

  // Rebuild from a stored matrix (certificate replay). For an idempotent P
  // the image is exactly the fixed space of P, so both bases are canonical.
  static Projector from_matrix(const RationalMatrix& m) {
    if (!(m * m == m))
      throw InputError("invalid-projector: matrix is not idempotent");
    Projector p;
    p.matrix = m;
    RationalMatrix shifted = m;
    for (std::size_t i = 0; i < m.n(); ++i)
      shifted.at(i, i) = shifted.at(i, i) - Rational(1);
    p.image = kernel_basis(shifted);
    p.kernel = kernel_basis(m);
    return p;
  }

  // dim(im) - dim(ker) >= 2 is the usability threshold for the searches.
  bool wide_enough() const { return image.size() >= kernel.size() + 2; }
};

// Standard block involution diag(1,...,1,-1,...,-1) with r leading ones.
inline RationalMatrix block_involution(std::size_t n, std::size_t r) {
  if (r > n) throw InputError("block_involution: r > n");
  RationalMatrix t(n);
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = Rational(i < r ? 1 : -1);
  return t;
}

}  // namespace s2t
