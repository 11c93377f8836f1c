#include <catch2/catch_amalgamated.hpp>
#include <optional>

#include "fixture.hpp"
#include "s2t/involution.hpp"
#include "s2t/linalg.hpp"
#include "s2t/matrix.hpp"
#include "s2t/rng.hpp"

using namespace s2t;

namespace {

RationalMatrix random_matrix(Rng& rng, std::size_t n, long height) {
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rng.rational(height);
  return m;
}

RationalMatrix random_invertible(Rng& rng, std::size_t n, long height) {
  for (;;) {
    RationalMatrix m = random_matrix(rng, n, height);
    if (det(m) != Rational(0)) return m;
  }
}

}  // namespace

TEST_CASE("multiplication, inverse and determinant agree exactly") {
  Rng rng(10);
  for (std::size_t n : {2, 3, 4}) {
    for (int rep = 0; rep < 30; ++rep) {
      RationalMatrix a = random_invertible(rng, n, 5);
      RationalMatrix b = random_invertible(rng, n, 5);
      CHECK(det(a * b) == det(a) * det(b));
      auto ai = inverse(a);
      REQUIRE(ai);
      CHECK(a * *ai == RationalMatrix::identity(n));
      CHECK(*ai * a == RationalMatrix::identity(n));
      CHECK(det(*ai) == det(a).inv());
      CHECK((a * b).transpose() == b.transpose() * a.transpose());
    }
  }
}

TEST_CASE("singular matrices have no inverse and a nontrivial kernel") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    RationalMatrix m = random_matrix(rng, 4, 5);
    // force a dependency: last row becomes the sum of the first two
    for (std::size_t j = 0; j < 4; ++j) m.at(3, j) = m.at(0, j) + m.at(1, j);
    CHECK(det(m) == Rational(0));
    CHECK_FALSE(inverse(m));
    auto ker = kernel_basis(m);
    REQUIRE(!ker.empty());
    for (const Vec& v : ker) {
      CHECK_FALSE(is_zero_vec(v));
      CHECK(is_zero_vec(m.apply(v)));
    }
    // rank-nullity
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < 4; ++i) rows.push_back(m.row(i));
    CHECK(rank_of(rows) + ker.size() == 4);
  }
}

TEST_CASE("from_columns/col round trip and apply is column action") {
  Rng rng(12);
  std::vector<Vec> cols;
  for (int j = 0; j < 3; ++j) cols.push_back(rng.nonzero_vector(3, 5));
  RationalMatrix m = from_columns(cols);
  for (std::size_t j = 0; j < 3; ++j) CHECK(m.col(j) == cols[j]);
  Vec e1{Rational(1), Rational(0), Rational(0)};
  CHECK(m.apply(e1) == cols[0]);
}

TEST_CASE("scalar and identity predicates") {
  CHECK(RationalMatrix::identity(4).is_identity());
  CHECK(RationalMatrix::identity(4).is_scalar());
  CHECK(RationalMatrix::identity(4).scaled(Rational(3)).is_scalar());
  RationalMatrix m = RationalMatrix::identity(4);
  m.at(0, 1) = Rational(1);
  CHECK_FALSE(m.is_scalar());
}

TEST_CASE("averaging projector of an involution is idempotent with the right split") {
  Rng rng(13);
  RationalMatrix t0 = fixture::t6();
  for (int rep = 0; rep < 25; ++rep) {
    // a random conjugate, still an involution
    RationalMatrix c = random_invertible(rng, 6, 3);
    RationalMatrix t = c * t0 * *inverse(c);
    Involution inv = Involution::make(t);
    Projector p = Projector::from_involution(inv);
    CHECK(p.matrix * p.matrix == p.matrix);
    CHECK(p.image.size() == 4);
    CHECK(p.kernel.size() == 2);
    CHECK(p.wide_enough());
    // image vectors are fixed, kernel vectors are killed
    for (const Vec& w : p.image) CHECK(p.matrix.apply(w) == w);
    for (const Vec& w : p.kernel) CHECK(is_zero_vec(p.matrix.apply(w)));
    // rebuilding from the matrix alone gives an idempotent with equal spans
    Projector q = Projector::from_matrix(p.matrix);
    CHECK(q.matrix == p.matrix);
    CHECK(q.image.size() == p.image.size());
    CHECK(q.kernel.size() == p.kernel.size());
  }
  RationalMatrix not_idem = RationalMatrix::identity(3).scaled(Rational(2));
  CHECK_THROWS_AS(Projector::from_matrix(not_idem), InputError);
}

TEST_CASE("involution validation rejects non-involutions") {
  CHECK_THROWS_AS(Involution::make(RationalMatrix::identity(4)), InputError);
  CHECK_THROWS_AS(Involution::make(fixture::unipotent6()), InputError);
  CHECK_THROWS_AS(block_involution(4, 5), InputError);
}

namespace {

// Brute-force reference: v is an eigenvector when Mv equals (ratio at the
// first nonzero coordinate) * v entrywise.
std::optional<Rational> reference_scalar(const RationalMatrix& m, const std::vector<Vec>& vecs) {
  std::optional<Rational> lambda;
  for (const Vec& v : vecs) {
    Vec mv = m.apply(v);
    std::optional<Rational> lam;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) {
        lam = mv[i] / v[i];
        break;
      }
    for (std::size_t i = 0; i < v.size(); ++i)
      if (mv[i] != *lam * v[i]) return std::nullopt;
    if (lambda && *lambda != *lam) return std::nullopt;
    lambda = lam;
  }
  return lambda;
}

std::vector<Vec> general_position_family(Rng& rng, std::size_t n, long height) {
  for (;;) {
    std::vector<Vec> vecs;
    for (std::size_t i = 0; i < n + 1; ++i) vecs.push_back(rng.nonzero_vector(n, height));
    if (general_position(vecs)) return vecs;
  }
}

}  // namespace

TEST_CASE("scalar detection from a spanning eigenvector family matches brute force") {
  Rng rng(14);
  long agreements = 0;
  for (std::size_t n : {4, 6}) {
    for (int rep = 0; rep < 600; ++rep) {
      std::vector<Vec> vecs = general_position_family(rng, n, 3);
      RationalMatrix m(n);
      switch (rep % 3) {
        case 0:  // scalar, including zero
          m = RationalMatrix::identity(n).scaled(rng.rational(4));
          break;
        case 1:  // diagonal, usually not scalar
          for (std::size_t i = 0; i < n; ++i) m.at(i, i) = rng.rational(3);
          break;
        default:  // dense random
          m = random_matrix(rng, n, 3);
          break;
      }
      auto expected = reference_scalar(m, vecs);
      auto got = scalar_from_eigenvectors(m, vecs);
      REQUIRE(got == expected);
      if (expected) CHECK(m.is_scalar());
      ++agreements;
    }
  }
  CHECK(agreements == 1200);
}

TEST_CASE("scalar_on_subspace tells restricted scalars from everything else") {
  RationalMatrix m(4);
  m.at(0, 0) = Rational(3);
  m.at(1, 1) = Rational(3);
  m.at(2, 2) = Rational(5);
  m.at(3, 3) = Rational(7);
  Vec e0{Rational(1), Rational(0), Rational(0), Rational(0)};
  Vec e1{Rational(0), Rational(1), Rational(0), Rational(0)};
  Vec e2{Rational(0), Rational(0), Rational(1), Rational(0)};
  auto lam = scalar_on_subspace(m, {e0, e1});
  REQUIRE(lam);
  CHECK(*lam == Rational(3));
  CHECK_FALSE(scalar_on_subspace(m, {e0, e2}));
  // zero map on a subspace reports lambda = 0
  RationalMatrix z(4);
  auto zl = scalar_on_subspace(z, {e0, e1});
  REQUIRE(zl);
  CHECK(zl->is_zero());
  CHECK_THROWS(scalar_on_subspace(m, {e0, e0}));  // dependent basis
}
