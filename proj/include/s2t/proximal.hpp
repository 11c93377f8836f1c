#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "s2t/errors.hpp"
#include "s2t/involution.hpp"
#include "s2t/linalg.hpp"
#include "s2t/matrix.hpp"
#include "s2t/projective.hpp"
#include "s2t/rng.hpp"

namespace s2t {

// Change of basis v1..vn (columns) plus a scale L.  The scaled map built from
// it stretches along [v1], contracts along [v2] and fixes the rest, so [v1]
// and [v2] act as attracting points of the map and its inverse, with the
// opposite hyperplanes repelling.
struct PingPongScheme {
  RationalMatrix basis;      // columns v1..vn
  RationalMatrix basis_inv;  // cached inverse
  Rational L = Rational(2);
  std::uint64_t seed = 0;    // seed the basis was drawn from, 0 if handmade

  std::size_t n() const { return basis.n(); }
  Vec v(std::size_t i) const { return basis.col(i); }

  ProjectivePoint a_plus() const { return ProjectivePoint(v(0)); }
  ProjectivePoint a_minus() const { return ProjectivePoint(v(1)); }

  ProjectiveHyperplane h_plus() const { return span_omitting_(0); }
  ProjectiveHyperplane h_minus() const { return span_omitting_(1); }

 private:
  ProjectiveHyperplane span_omitting_(std::size_t skip) const {
    std::vector<Vec> span;
    span.reserve(n() - 1);
    for (std::size_t i = 0; i < n(); ++i)
      if (i != skip) span.push_back(v(i));
    return ProjectiveHyperplane::through(span);
  }
};

inline PingPongScheme make_scheme(RationalMatrix basis, Rational L,
                                  std::uint64_t seed = 0) {
  auto inv = inverse(basis);
  if (!inv) throw InputError("invalid-scheme: singular basis");
  PingPongScheme s;
  s.basis = std::move(basis);
  s.basis_inv = std::move(*inv);
  s.L = std::move(L);
  s.seed = seed;
  return s;
}

// f(L): v1 -> L v1, v2 -> (1/L) v2, vi -> vi.  Determinant is exactly 1.
inline RationalMatrix build_scaled(const PingPongScheme& s) {
  RationalMatrix d = RationalMatrix::identity(s.n());
  d.at(0, 0) = s.L;
  d.at(1, 1) = s.L.inv();
  return s.basis * d * s.basis_inv;
}

// Same map, with the basis required to be compatible with the eigenspace
// splitting of t: v1..vr a basis of the fixed space, the rest a basis of the
// flipped space.  The result then commutes with t and restricts to the
// identity on the flipped space.
inline RationalMatrix build_hnn_scaled(const Involution& t, const PingPongScheme& s) {
  if (s.n() != t.n()) throw InputError("invalid-scheme: dimension mismatch");
  const std::size_t r = t.r();
  for (std::size_t i = 0; i < s.n(); ++i) {
    Vec vi = s.v(i);
    Vec tvi = t.matrix().apply(vi);
    bool ok = true;
    for (std::size_t j = 0; j < s.n(); ++j) {
      Rational want = i < r ? vi[j] : -vi[j];
      if (tvi[j] != want) { ok = false; break; }
    }
    if (!ok)
      throw InputError(
          "invalid-scheme: basis not compatible with the eigenspace splitting");
  }
  return build_scaled(s);
}

// Per-condition verdicts with a short witness description on failure.
struct ConditionReport {
  struct Item {
    std::string name;
    bool pass = true;
    std::string witness;  // empty when pass
  };
  std::vector<Item> items;

  bool all() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
  void add(std::string name, bool pass, std::string witness = "") {
    items.push_back({std::move(name), pass, pass ? std::string() : std::move(witness)});
  }
  const Item* first_failure() const {
    for (const auto& it : items)
      if (!it.pass) return &it;
    return nullptr;
  }
};

namespace detail {

inline std::string letter_tag(const char* set, std::size_t i) {
  return std::string(set) + "[" + std::to_string(i) + "]";
}

// v minus its components along the given (pairwise use is fine: each b is
// only required nonzero) directions, exact.
inline Vec orthogonalize_against(Vec v, const std::vector<Vec>& dirs) {
  for (const Vec& b : dirs) {
    Rational bb = norm_sq(b);
    if (bb.is_zero()) throw std::invalid_argument("orthogonalize: zero direction");
    Rational c = dot(v, b) / bb;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
  }
  return v;
}

inline Vec sample_in_span(Rng& rng, const std::vector<Vec>& basis, int height) {
  Vec v(basis[0].size(), Rational(0));
  for (const Vec& b : basis) {
    Rational c = rng.rational(height);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * b[i];
  }
  return v;
}

}  // namespace detail

// Re-check every basis condition used by the free-product search: the
// returned report is all-true exactly when (scheme, x) satisfy the selection
// conditions against the given letter sets and projector.
inline ConditionReport check_free_scheme(const PingPongScheme& s, const Vec& x,
                                         const std::vector<RationalMatrix>& g_letters,
                                         const std::vector<RationalMatrix>& h_letters,
                                         const Projector& pr) {
  ConditionReport rep;
  Vec v1 = s.v(0), v2 = s.v(1);
  ProjectiveHyperplane hp = s.h_plus(), hm = s.h_minus();

  for (std::size_t i = 0; i < g_letters.size(); ++i)
    rep.add("v1-not-eigenvector " + detail::letter_tag("g", i),
            !is_eigenvector(g_letters[i], v1), to_string(g_letters[i]));
  bool indep = !parallel(v2, v1) && !is_zero_vec(v2);
  rep.add("v2-independent", indep);
  for (std::size_t i = 0; i < h_letters.size(); ++i)
    rep.add("v2-not-eigenvector " + detail::letter_tag("h", i),
            !is_eigenvector(h_letters[i], v2), to_string(h_letters[i]));

  // letters move the attractors off the repelling hyperplanes
  for (std::size_t i = 0; i < g_letters.size(); ++i)
    rep.add("g-aplus-off-hminus " + detail::letter_tag("g", i),
            !hm.contains_vec(g_letters[i].apply(v1)), to_string(g_letters[i]));
  for (std::size_t i = 0; i < h_letters.size(); ++i)
    rep.add("h-aminus-off-hplus " + detail::letter_tag("h", i),
            !hp.contains_vec(h_letters[i].apply(v2)), to_string(h_letters[i]));

  // the probe point: x itself and every g(x) stay off the repelling
  // hyperplane of the inverse map
  rep.add("x-off-hminus", !hm.contains_vec(x));
  for (std::size_t i = 0; i < g_letters.size(); ++i)
    rep.add("g-x-off-hminus " + detail::letter_tag("g", i),
            !hm.contains_vec(g_letters[i].apply(x)), to_string(g_letters[i]));

  // projected attractor differs from x, for every possible leading letter
  auto proj_differs = [&](const Vec& w) {
    Vec pw = pr.matrix.apply(w);
    return is_zero_vec(pw) || !parallel(pw, x);
  };
  rep.add("pr-aplus-ne-x", proj_differs(v1));
  for (std::size_t i = 0; i < g_letters.size(); ++i)
    rep.add("pr-g-aplus-ne-x " + detail::letter_tag("g", i),
            proj_differs(g_letters[i].apply(v1)), to_string(g_letters[i]));
  return rep;
}

// Re-check the basis conditions used by the stable-letter search against the
// symmetric letter set S0 (which must exclude the identity and t).
inline ConditionReport check_hnn_scheme(const PingPongScheme& s,
                                        const std::vector<RationalMatrix>& s0,
                                        const Involution& t) {
  ConditionReport rep;
  const RationalMatrix& pr = t.projector();
  Vec v1 = s.v(0), v2 = s.v(1);
  ProjectiveHyperplane hp = s.h_plus(), hm = s.h_minus();

  for (std::size_t i = 0; i < s0.size(); ++i) {
    Vec pg1 = pr.apply(s0[i].apply(v1));
    Vec pg2 = pr.apply(s0[i].apply(v2));
    std::string tag = detail::letter_tag("S0", i);
    rep.add("v1-not-eigenvector " + tag, !parallel(pg1, v1) && !is_zero_vec(pg1),
            to_string(s0[i]));
    rep.add("v2-not-eigenvector " + tag, !parallel(pg2, v2) && !is_zero_vec(pg2),
            to_string(s0[i]));
    rep.add("projected-v1-image-off-v2 " + tag, !parallel(pg1, v2), to_string(s0[i]));
    rep.add("projected-v2-image-off-v1 " + tag, !parallel(pg2, v1), to_string(s0[i]));
    // letters move both attractors off both hyperplanes
    Vec g1 = s0[i].apply(v1), g2 = s0[i].apply(v2);
    rep.add("g-aplus-off-hyperplanes " + tag, !hp.contains_vec(g1) && !hm.contains_vec(g1),
            to_string(s0[i]));
    rep.add("g-aminus-off-hyperplanes " + tag, !hp.contains_vec(g2) && !hm.contains_vec(g2),
            to_string(s0[i]));
  }
  return rep;
}

struct ChooseOpts {
  int height = 10;       // numerator/denominator bound for sampled rationals
  int vector_tries = 300;  // rejection budget per vector draw
  int retry_cap = 64;      // full restarts before giving up
};

namespace detail {

[[noreturn]] inline void basis_exhausted(const ConditionReport& last) {
  std::string why = "basis-search-exhausted";
  if (const auto* f = last.first_failure())
    why += ": " + f->name + (f->witness.empty() ? "" : " at " + f->witness);
  throw SearchError(why);
}

}  // namespace detail

// Draw a scheme basis and probe point for the free-product step.  v1 avoids
// the eigenvectors of the g letters, v2 of the h letters; the remaining
// columns are orthogonalized against v1 and v2 (keeping the probe distances
// monotone in L) and the whole draw is rejected until the full condition
// report passes.  Deterministic in (inputs, seed).
inline std::pair<PingPongScheme, Vec> choose_basis_free(
    const std::vector<RationalMatrix>& g_letters,
    const std::vector<RationalMatrix>& h_letters, const Projector& pr,
    std::uint64_t seed, const ChooseOpts& opts = {}) {
  for (const auto* set : {&g_letters, &h_letters})
    for (const auto& m : *set)
      if (m.is_scalar())
        throw InputError("scalar-letter: " + to_string(m));
  if (!pr.wide_enough())
    throw InputError("projector-too-narrow: need dim(im) >= dim(ker) + 2");
  const std::size_t n = pr.matrix.n();

  ConditionReport last;
  for (int attempt = 0; attempt < opts.retry_cap; ++attempt) {
    Rng rng(derive_seed(seed, "basis-free", static_cast<std::uint64_t>(attempt)));
    auto draw = [&](auto&& accept, const std::vector<Vec>& ortho) -> std::optional<Vec> {
      for (int i = 0; i < opts.vector_tries; ++i) {
        Vec v = rng.nonzero_vector(n, opts.height);
        if (!ortho.empty()) {
          v = detail::orthogonalize_against(v, ortho);
          if (is_zero_vec(v)) continue;
        }
        if (accept(v)) return v;
      }
      return std::nullopt;
    };

    auto v1 = draw([&](const Vec& v) {
      for (const auto& g : g_letters)
        if (is_eigenvector(g, v)) return false;
      return true;
    }, {});
    if (!v1) continue;
    auto v2 = draw([&](const Vec& v) {
      for (const auto& h : h_letters)
        if (is_eigenvector(h, v)) return false;
      return true;
    }, {*v1});
    if (!v2) continue;

    std::vector<Vec> cols{*v1, *v2};
    bool full = true;
    for (std::size_t j = 2; j < n && full; ++j) {
      auto vj = draw([&](const Vec& v) {
        auto probe = cols;
        probe.push_back(v);
        return rank_of(probe) == probe.size();
      }, {*v1, *v2});
      if (!vj) { full = false; break; }
      cols.push_back(*vj);
    }
    if (!full) continue;

    PingPongScheme s = make_scheme(from_columns(cols), Rational(2), seed);

    // the probe point lives in the image of the projector
    std::vector<Vec> wbasis;
    for (std::size_t j = 0; j < pr.image.size(); ++j) wbasis.push_back(pr.image[j]);
    Vec x;
    bool got_x = false;
    for (int i = 0; i < opts.vector_tries && !got_x; ++i) {
      x = detail::sample_in_span(rng, wbasis, opts.height);
      if (is_zero_vec(x)) continue;
      last = check_free_scheme(s, x, g_letters, h_letters, pr);
      got_x = last.all();
    }
    if (got_x) return {s, x};
  }
  detail::basis_exhausted(last);
}

// Draw a scheme basis for the stable-letter step: v1, v2 inside the fixed
// space of t avoiding the projected images of the letters, the rest of the
// fixed-space basis orthogonalized against them, and the flipped-space basis
// taken from t itself.  Conditions re-checked exactly before returning.
inline PingPongScheme choose_basis_hnn(const std::vector<RationalMatrix>& s0,
                                       const Involution& t, std::uint64_t seed,
                                       const ChooseOpts& opts = {}) {
  const std::size_t r = t.r();
  const std::size_t n = t.n();
  if (r < (n - r) + 2)
    throw InputError("fixed-space-too-small: need dim W+ >= dim W- + 2");
  const RationalMatrix& pr = t.projector();
  for (const auto& g : s0) {
    if (g.is_identity() || g == t.matrix())
      throw InputError("letter-set-contains-excluded: " + to_string(g));
    if (scalar_on_subspace(pr * g, t.w_plus()))
      throw InputError("inherited-aux-violated: " + to_string(g));
  }

  ConditionReport last;
  for (int attempt = 0; attempt < opts.retry_cap; ++attempt) {
    Rng rng(derive_seed(seed, "basis-hnn", static_cast<std::uint64_t>(attempt)));
    auto draw_wplus = [&](auto&& accept, const std::vector<Vec>& ortho) -> std::optional<Vec> {
      for (int i = 0; i < opts.vector_tries; ++i) {
        Vec v = detail::sample_in_span(rng, t.w_plus(), opts.height);
        if (is_zero_vec(v)) continue;
        if (!ortho.empty()) {
          v = detail::orthogonalize_against(v, ortho);
          if (is_zero_vec(v)) continue;
        }
        if (accept(v)) return v;
      }
      return std::nullopt;
    };

    auto in_omega = [&](const Vec& v) {
      for (const auto& g : s0) {
        Vec pg = pr.apply(g.apply(v));
        if (is_zero_vec(pg) || parallel(pg, v)) return false;
      }
      return true;
    };
    auto v1 = draw_wplus(in_omega, {});
    if (!v1) continue;
    auto v2 = draw_wplus([&](const Vec& v) {
      if (!in_omega(v)) return false;
      for (const auto& g : s0)
        if (parallel(pr.apply(g.apply(*v1)), v)) return false;
      return true;
    }, {*v1});
    if (!v2) continue;

    std::vector<Vec> cols{*v1, *v2};
    bool full = true;
    for (std::size_t j = 2; j < r && full; ++j) {
      auto vj = draw_wplus([&](const Vec& v) {
        auto probe = cols;
        probe.push_back(v);
        return rank_of(probe) == probe.size();
      }, {*v1, *v2});
      if (!vj) { full = false; break; }
      cols.push_back(*vj);
    }
    if (!full) continue;
    for (const Vec& wm : t.w_minus()) cols.push_back(wm);

    auto inv_check = inverse(from_columns(cols));
    if (!inv_check) continue;
    PingPongScheme s = make_scheme(from_columns(cols), Rational(2), seed);
    last = check_hnn_scheme(s, s0, t);
    if (last.all()) return s;
  }
  detail::basis_exhausted(last);
}

// Exact squared projective distances d^2(f(L)^dir x, attractor) for each L in
// the sequence; diagnostic evidence that the scaled maps are proximal.
inline std::vector<Rational> proximality_probe(const PingPongScheme& scheme,
                                               const ProjectivePoint& x,
                                               const std::vector<Rational>& Ls,
                                               int direction = +1) {
  if (direction != 1 && direction != -1)
    throw InputError("probe-direction: expected +1 or -1");
  ProjectiveHyperplane repelling = direction == 1 ? scheme.h_plus() : scheme.h_minus();
  if (repelling.contains_vec(x.rep()))
    throw InputError("probe-point-on-repelling-hyperplane");
  ProjectivePoint target = direction == 1 ? scheme.a_plus() : scheme.a_minus();
  std::vector<Rational> out;
  out.reserve(Ls.size());
  for (const Rational& L : Ls) {
    PingPongScheme s = scheme;
    s.L = L;
    RationalMatrix f = build_scaled(s);
    if (direction == -1) f = *inverse(f);
    out.push_back(proj_distance_sq(apply(f, x), target));
  }
  return out;
}

}  // namespace s2t
