#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "s2t/ball.hpp"
#include "s2t/enumerate.hpp"
#include "s2t/errors.hpp"
#include "s2t/involution.hpp"
#include "s2t/linalg.hpp"
#include "s2t/matrix.hpp"
#include "s2t/modp.hpp"
#include "s2t/proximal.hpp"
#include "s2t/rng.hpp"
#include "s2t/words.hpp"

namespace s2t {

// Everything needed to re-run the word-ball checks from the file alone: the
// scheme, the assigned letter, the scan parameters, and snapshots of the
// generator matrices the scan ranged over. `checked_words` pins the exact
// number of words the scan decided, so a replay that walks a different set
// is detected even when every word it does walk passes.
struct EmbeddingCertificate {
  std::string kind;  // "free" or "hnn"
  PingPongScheme scheme;
  RationalMatrix ell;  // free: the conjugator itself; hnn: the stable letter image
  int radius = 0;
  int exponent_cap = 0;
  std::uint64_t checked_words = 0;
  bool aux = false;
  int involution_conjugacy_radius = 0;  // filled by the caller that runs that check
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::int64_t created = 0;
  std::vector<std::string> violations;

  // Replay snapshot.
  std::vector<std::pair<std::string, RationalMatrix>> side0_gens;
  std::vector<std::pair<std::string, RationalMatrix>> side1_gens;  // free only
  RationalMatrix pr_mat;  // free only
  RationalMatrix t_mat;   // hnn only
  RationalMatrix v_mat;   // hnn only
  GroupWord conj_word;    // hnn only: spelling of the conjugator over side0_gens
};

struct EmbedOpts {
  int lmax_exp = 10;     // scaling ladder tops out at 2^lmax_exp
  int basis_retries = 8; // fresh basis samples after a ladder is exhausted
  int conj_radius = 4;   // ball radius for the conjugator search (hnn)
  ChooseOpts choose;
};

namespace detail {

inline Rational pow2(int e) { return Rational(mpz_class(mpz_class(1) << e)); }

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kScreenPrime);
}

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul_mod(r, b);
    b = mul_mod(b, b);
    e >>= 1;
  }
  return r;
}

// Residue-level version of the "not scalar on the fixed space" condition.
// A positive answer is a proof (reduction mod p is a ring homomorphism, so a
// residue obstruction lifts); a negative answer decides nothing and the
// caller falls back to exact arithmetic. Construction fails soft: when any
// input has a denominator killed by the screen prime we simply run without
// the screen.
struct AuxScreen {
  bool valid = false;
  ModMatrix pr;
  std::vector<std::vector<std::uint64_t>> basis;
  std::vector<std::size_t> pivot;

  static AuxScreen make(const RationalMatrix& prm, const std::vector<Vec>& wbasis) {
    AuxScreen s;
    s.pr = ModMatrix::identity(prm.n());
    try {
      s.pr = ModMatrix::reduce(prm);
      for (const Vec& w : wbasis) {
        std::vector<std::uint64_t> r(w.size());
        std::size_t piv = w.size();
        for (std::size_t i = 0; i < w.size(); ++i) {
          r[i] = w[i].residue(kScreenPrime);
          if (r[i] != 0 && piv == w.size()) piv = i;
        }
        if (piv == w.size()) return s;  // basis vector vanishes mod p: no screen
        s.basis.push_back(std::move(r));
        s.pivot.push_back(piv);
      }
      s.valid = true;
    } catch (const std::domain_error&) {
      s.valid = false;
    }
    return s;
  }

  // True only when the residues already witness that Pr*M restricted to the
  // spanned subspace is not multiplication by one scalar.
  bool proves_nonscalar(const ModMatrix& m) const {
    if (!valid) return false;
    bool have = false;
    std::uint64_t lambda = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      std::vector<std::uint64_t> y = pr.apply(m.apply(basis[i]));
      std::uint64_t li = mul_mod(y[pivot[i]], pow_mod(basis[i][pivot[i]], kScreenPrime - 2));
      for (std::size_t j = 0; j < y.size(); ++j)
        if (y[j] != mul_mod(li, basis[i][j])) return true;
      if (have && li != lambda) return true;
      lambda = li;
      have = true;
    }
    return false;
  }
};

inline bool aux_holds_exact(const RationalMatrix& prm, const std::vector<Vec>& wbasis,
                            const RationalMatrix& m) {
  return !scalar_on_subspace(prm * m, wbasis).has_value();
}

}  // namespace detail

struct ScanOutcome {
  bool ok = true;
  std::uint64_t checked = 0;
  std::string violation;  // first failing word, rendered; empty when ok
};

// Conjugate every alphabet entry, keeping its display (the display names the
// abstract element; the matrix is its image under the current assignment).
inline std::vector<BaseLetter> conj_alphabet(const std::vector<BaseLetter>& src,
                                             const RationalMatrix& f,
                                             const RationalMatrix& f_inv) {
  std::vector<BaseLetter> out;
  out.reserve(src.size());
  for (const auto& e : src) {
    RationalMatrix m = f * e.m * f_inv;
    ModMatrix img = ModMatrix::reduce(m);
    out.push_back({std::move(m), std::move(img), e.display});
  }
  return out;
}

// Exhaustive check over alternating words of <= radius syllables: the image
// of every word that is not a bare side-0 syllable must act non-scalarly on
// the given subspace after projecting. Bare side-0 syllables are exempt by
// design: they are elements of the untouched factor and carry no claim.
inline ScanOutcome scan_free_ball(const std::vector<BaseLetter>& alpha0,
                                  const std::vector<BaseLetter>& alpha1,
                                  const RationalMatrix& prm,
                                  const std::vector<Vec>& wbasis, int radius) {
  detail::AuxScreen screen = detail::AuxScreen::make(prm, wbasis);
  ScanOutcome out;
  enumerate_alternating(alpha0, alpha1, radius, [&](const AltWord& w, const ModMatrix& img) {
    if (w.single_syllable_of(0)) return true;
    ++out.checked;
    if (screen.proves_nonscalar(img)) return true;
    RationalMatrix m = evaluate(w, alpha0, alpha1);
    if (detail::aux_holds_exact(prm, wbasis, m)) return true;
    out.ok = false;
    out.violation = render(w, alpha0, alpha1);
    return false;
  });
  return out;
}

// The base-group half of the extension scan: alphabet letters other than t
// itself must already satisfy the subspace condition. This part does not
// depend on the scaling, so it runs once per embedding (and once per replay)
// rather than once per ladder rung.
inline ScanOutcome pre_scan_base(const std::vector<BaseLetter>& alpha, std::size_t t_index,
                                 const RationalMatrix& prm, const std::vector<Vec>& wbasis) {
  ScanOutcome out;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i == t_index) continue;
    ++out.checked;
    if (detail::aux_holds_exact(prm, wbasis, alpha[i].m)) continue;
    out.ok = false;
    out.violation = alpha[i].display;
    break;
  }
  return out;
}

// Exhaustive check over pinch-free token words of <= radius tokens that use
// the stable letter at least once (pure base words are covered by
// pre_scan_base). Same condition, same screen-then-exact policy.
inline ScanOutcome scan_hnn_ball(const std::vector<BaseLetter>& alpha, std::size_t t_index,
                                 const RationalMatrix& k, const RationalMatrix& prm,
                                 const std::vector<Vec>& wbasis, int radius) {
  detail::AuxScreen screen = detail::AuxScreen::make(prm, wbasis);
  auto kinv = inverse(k);
  if (!kinv) throw InputError("stable-letter-not-invertible");
  ModMatrix k_img = ModMatrix::reduce(k);
  ScanOutcome out;
  enumerate_hnn_words(alpha, k_img, t_index, radius,
                      [&](const TokWord& w, const ModMatrix& img) {
                        if (w.is_pure_base()) return true;
                        ++out.checked;
                        if (screen.proves_nonscalar(img)) return true;
                        RationalMatrix m = evaluate(w, alpha, k, *kinv);
                        if (detail::aux_holds_exact(prm, wbasis, m)) return true;
                        out.ok = false;
                        out.violation = render(w, alpha);
                        return false;
                      });
  return out;
}

namespace detail {

inline void require_no_scalars(const Ball& ball, const std::string& which) {
  for (std::size_t i = 1; i < ball.size(); ++i)
    if (ball.exact(i).is_scalar())
      throw InputError("scalar-in-factor: " + which + " contains scalar element " +
                       to_string(ball.table_word(i), ball.table()));
}

inline std::vector<RationalMatrix> letter_matrices(const std::vector<BaseLetter>& a) {
  std::vector<RationalMatrix> out;
  out.reserve(a.size());
  for (const auto& e : a) out.push_back(e.m);
  return out;
}

inline GeneratorTable make_table(const std::vector<std::pair<std::string, RationalMatrix>>& gens) {
  GeneratorTable t;
  for (const auto& [name, m] : gens) t.add(name, Factor::Base, m);
  return t;
}

}  // namespace detail

struct FreeEmbedding {
  RationalMatrix f;  // conjugator: the second factor is rewritten through it
  EmbeddingCertificate cert;
};

// Find a conjugator f such that the pair (first factor as given, second
// factor conjugated by f) passes the exhaustive alternating-word scan, and
// certify the successful scan. The first factor may be empty (nothing to
// alternate against on side 0; the scan then ranges over side-1 powers only).
inline FreeEmbedding embed_free_product(
    const std::vector<std::pair<std::string, RationalMatrix>>& g_gens,
    const std::vector<std::pair<std::string, RationalMatrix>>& h_gens,
    const Projector& pr, int radius, int exponent_cap, std::uint64_t seed,
    const EmbedOpts& opts = {}) {
  if (h_gens.empty()) throw InputError("free-embedding: second factor has no generators");
  const std::size_t n = pr.matrix.n();
  if (n < 3) throw InputError("free-embedding: dimension below 3");
  if (!pr.wide_enough())
    throw InputError("free-embedding: projector image too narrow for the basis search");

  std::vector<BaseLetter> alpha0;
  if (!g_gens.empty()) {
    GeneratorTable gt = detail::make_table(g_gens);
    Ball gball(gt, single_letter_words(gt), exponent_cap);
    detail::require_no_scalars(gball, "first factor ball");
    alpha0 = base_alphabet(gball);
  }
  GeneratorTable ht = detail::make_table(h_gens);
  Ball hball(ht, single_letter_words(ht), exponent_cap);
  detail::require_no_scalars(hball, "second factor ball");
  std::vector<BaseLetter> alpha1_src = base_alphabet(hball);

  std::vector<RationalMatrix> g_letters = detail::letter_matrices(alpha0);
  std::vector<RationalMatrix> h_letters = detail::letter_matrices(alpha1_src);

  std::string last = "no scan attempted";
  for (int attempt = 0; attempt < opts.basis_retries; ++attempt) {
    PingPongScheme scheme;
    try {
      scheme = choose_basis_free(g_letters, h_letters, pr,
                                 derive_seed(seed, "free-basis", attempt), opts.choose)
                   .first;
    } catch (const SearchError& e) {
      last = e.what();
      continue;
    }
    for (int e = 1; e <= opts.lmax_exp; ++e) {
      scheme.L = detail::pow2(e);
      RationalMatrix f = build_scaled(scheme);
      auto f_inv = inverse(f);
      if (!f_inv) throw InputError("free-embedding: scaled conjugator not invertible");
      ScanOutcome out;
      try {
        std::vector<BaseLetter> alpha1 = conj_alphabet(alpha1_src, f, *f_inv);
        out = scan_free_ball(alpha0, alpha1, pr.matrix, pr.image, radius);
      } catch (const std::domain_error&) {
        last = "screen prime degenerate at this scaling";
        continue;  // next rung changes every entry
      }
      if (out.ok) {
        EmbeddingCertificate cert;
        cert.kind = "free";
        cert.scheme = scheme;
        cert.ell = f;
        cert.radius = radius;
        cert.exponent_cap = exponent_cap;
        cert.checked_words = out.checked;
        cert.aux = true;
        cert.seed = seed;
        cert.side0_gens = g_gens;
        cert.side1_gens = h_gens;
        cert.pr_mat = pr.matrix;
        return {std::move(f), std::move(cert)};
      }
      last = out.violation;
    }
  }
  throw SearchError("embedding-search-failure: free scan kept failing, last violating word " +
                    last);
}

struct HnnEmbedding {
  RationalMatrix ell;  // image of the stable letter
  EmbeddingCertificate cert;
};

// Find a stable-letter image ell with ell^-1 t ell = v whose pinch-free word
// ball passes the scan. ell = u*h where h is a ball element conjugating t to
// v and u commutes with t; the scan runs in coordinates where the stable
// letter acts as u alone.
inline HnnEmbedding embed_hnn(const std::vector<std::pair<std::string, RationalMatrix>>& g_gens,
                              const Involution& t, const RationalMatrix& v, int radius,
                              int exponent_cap, std::uint64_t seed, const EmbedOpts& opts = {}) {
  const std::size_t n = t.matrix().n();
  if (v.n() != n) throw InputError("extension-target: dimension mismatch");
  if (!(v * v).is_identity() || v.is_scalar())
    throw InputError("extension-target: not a nonscalar involution");
  if (v == t.matrix()) throw InputError("extension-target: already equal to the pivot");

  GeneratorTable table = detail::make_table(g_gens);

  // Conjugator search: t*h == h*v is equivalent to h^-1 t h = v and needs no
  // inverses, so residues can prune it directly.
  Ball cball(table, single_letter_words(table), opts.conj_radius);
  ModMatrix t_img = ModMatrix::reduce(t.matrix());
  ModMatrix v_img = ModMatrix::reduce(v);
  std::optional<std::size_t> h_at;
  for (std::size_t i = 0; i < cball.size(); ++i) {
    if (!(t_img * cball[i].img == cball[i].img * v_img)) continue;
    if (t.matrix() * cball.exact(i) == cball.exact(i) * v) {
      h_at = i;
      break;
    }
  }
  if (!h_at)
    throw InputError("missing-conjugator: no element within radius " +
                     std::to_string(opts.conj_radius) + " conjugates the pivot to the target");
  RationalMatrix h = cball.exact(*h_at);
  GroupWord conj_word = cball.table_word(*h_at);

  Ball sball(table, single_letter_words(table), exponent_cap);
  detail::require_no_scalars(sball, "base ball");
  std::vector<BaseLetter> alpha = base_alphabet(sball);
  std::size_t t_index = alpha.size();
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i].m == t.matrix()) {
      t_index = i;
      break;
    }

  ScanOutcome pre = pre_scan_base(alpha, t_index, t.projector(), t.w_plus());
  if (!pre.ok)
    throw InputError("inherited-aux-violated: base element " + pre.violation +
                     " is scalar on the fixed space after projecting");

  std::vector<RationalMatrix> s0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (i != t_index) s0.push_back(alpha[i].m);

  std::string last = "no scan attempted";
  for (int attempt = 0; attempt < opts.basis_retries; ++attempt) {
    PingPongScheme scheme;
    try {
      scheme = choose_basis_hnn(s0, t, derive_seed(seed, "hnn-basis", attempt), opts.choose);
    } catch (const SearchError& e) {
      last = e.what();
      continue;
    }
    for (int e = 1; e <= opts.lmax_exp; ++e) {
      scheme.L = detail::pow2(e);
      RationalMatrix u = build_hnn_scaled(t, scheme);
      RationalMatrix ell = u * h;
      if (!(inverse(ell).value() * t.matrix() * ell == v))
        throw InputError("extension-relation-broken: ell does not conjugate the pivot");
      bool finite_order = false;
      RationalMatrix p = ell;
      for (int j = 1; j <= 2 * radius; ++j) {
        if (p.is_identity()) {
          finite_order = true;
          break;
        }
        p = p * ell;
      }
      if (finite_order) {
        last = "stable letter had finite order at this scaling";
        continue;
      }
      ScanOutcome out;
      try {
        out = scan_hnn_ball(alpha, t_index, u, t.projector(), t.w_plus(), radius);
      } catch (const std::domain_error&) {
        last = "screen prime degenerate at this scaling";
        continue;
      }
      if (out.ok) {
        EmbeddingCertificate cert;
        cert.kind = "hnn";
        cert.scheme = scheme;
        cert.ell = ell;
        cert.radius = radius;
        cert.exponent_cap = exponent_cap;
        cert.checked_words = pre.checked + out.checked;
        cert.aux = true;
        cert.seed = seed;
        cert.side0_gens = g_gens;
        cert.t_mat = t.matrix();
        cert.v_mat = v;
        cert.conj_word = conj_word;
        return {std::move(ell), std::move(cert)};
      }
      last = out.violation;
    }
  }
  throw SearchError("embedding-search-failure: extension scan kept failing, last violating word " +
                    last);
}

// Ball-level form of the condition the scans establish: every ball element
// other than 1 and t itself must avoid acting scalarly on the fixed space
// after projecting. Used when a group is assembled from certified pieces and
// the condition has to be rechecked over the joint generating set.
inline ConditionReport verify_aux_condition(const GeneratorTable& table, const Involution& t,
                                            int radius) {
  Ball ball(table, single_letter_words(table), radius);
  detail::AuxScreen screen = detail::AuxScreen::make(t.projector(), t.w_plus());
  ConditionReport rep;
  std::uint64_t checked = 0;
  for (std::size_t i = 1; i < ball.size(); ++i) {
    if (ball.exact(i) == t.matrix()) continue;
    ++checked;
    if (screen.proves_nonscalar(ball[i].img)) continue;
    if (detail::aux_holds_exact(t.projector(), t.w_plus(), ball.exact(i))) continue;
    rep.add("aux-ball-word", false, to_string(ball.table_word(i), ball.table()));
  }
  if (rep.items.empty())
    rep.add("aux-ball-radius-" + std::to_string(radius), true,
            std::to_string(checked) + " words checked");
  return rep;
}

// Every involution in the radius-N ball must be conjugate to t by some
// element of the radius-conj ball. Finite evidence for the conjugacy part of
// sharp 2-transitivity.
inline ConditionReport check_involutions_conjugate_ball(const GeneratorTable& table,
                                                        const Involution& t, int radius,
                                                        int conj_radius) {
  Ball ball(table, single_letter_words(table), radius);
  std::optional<Ball> cball_store;
  if (conj_radius != radius) cball_store.emplace(table, single_letter_words(table), conj_radius);
  const Ball& cball = cball_store ? *cball_store : ball;
  ModMatrix id_img = ModMatrix::identity(table.n());
  ModMatrix t_img = ModMatrix::reduce(t.matrix());
  ConditionReport rep;
  std::uint64_t found = 0;
  for (std::size_t i = 1; i < ball.size(); ++i) {
    if (!(ball[i].img * ball[i].img == id_img)) continue;
    const RationalMatrix& m = ball.exact(i);
    if (!(m * m).is_identity() || m.is_identity()) continue;
    ++found;
    bool conjugate = false;
    for (std::size_t c = 0; c < cball.size(); ++c) {
      // m*c == c*t is c^-1 m c = t without inverses.
      if (!(ball[i].img * cball[c].img == cball[c].img * t_img)) continue;
      if (m * cball.exact(c) == cball.exact(c) * t.matrix()) {
        conjugate = true;
        break;
      }
    }
    if (!conjugate)
      rep.add("involution-conjugate", false, to_string(ball.table_word(i), ball.table()));
  }
  if (rep.items.empty())
    rep.add("involutions-conjugate-radius-" + std::to_string(radius), true,
            std::to_string(found) + " involutions, all conjugate to the pivot");
  return rep;
}

struct ReplayResult {
  bool ok = true;
  std::string detail;
  std::uint64_t checked = 0;
};

// Re-run a certificate's scans from its own snapshot and compare both the
// verdict and the number of decided words against what the file claims.
inline ReplayResult replay_certificate(const EmbeddingCertificate& cert) {
  ReplayResult res;
  auto fail = [&](const std::string& why) {
    res.ok = false;
    res.detail = why;
    return res;
  };
  try {
    if (!cert.aux || !cert.violations.empty())
      return fail("certificate records a failed run");
    if (cert.kind == "free") {
      RationalMatrix f = build_scaled(cert.scheme);
      if (!(f == cert.ell)) return fail("stored conjugator disagrees with the stored scheme");
      auto f_inv = inverse(f);
      if (!f_inv) return fail("stored conjugator is singular");
      Projector pr = Projector::from_matrix(cert.pr_mat);

      std::vector<BaseLetter> alpha0;
      if (!cert.side0_gens.empty()) {
        GeneratorTable gt = detail::make_table(cert.side0_gens);
        Ball gball(gt, single_letter_words(gt), cert.exponent_cap);
        detail::require_no_scalars(gball, "first factor ball");
        alpha0 = base_alphabet(gball);
      }
      GeneratorTable ht = detail::make_table(cert.side1_gens);
      Ball hball(ht, single_letter_words(ht), cert.exponent_cap);
      detail::require_no_scalars(hball, "second factor ball");
      std::vector<BaseLetter> alpha1 = conj_alphabet(base_alphabet(hball), f, *f_inv);

      ScanOutcome out = scan_free_ball(alpha0, alpha1, pr.matrix, pr.image, cert.radius);
      res.checked = out.checked;
      if (!out.ok) return fail("scan found violating word " + out.violation);
      if (out.checked != cert.checked_words)
        return fail("word count mismatch: replay checked " + std::to_string(out.checked) +
                    ", certificate claims " + std::to_string(cert.checked_words));
      return res;
    }
    if (cert.kind == "hnn") {
      Involution t = Involution::make(cert.t_mat);
      GeneratorTable table = detail::make_table(cert.side0_gens);
      RationalMatrix u = build_hnn_scaled(t, cert.scheme);
      RationalMatrix h = evaluate(cert.conj_word, table);
      if (!(u * h == cert.ell))
        return fail("stored letter disagrees with the stored scheme and conjugator");
      auto ell_inv = inverse(cert.ell);
      if (!ell_inv) return fail("stored letter is singular");
      if (!(*ell_inv * t.matrix() * cert.ell == cert.v_mat))
        return fail("stored letter does not conjugate the pivot to the target");

      Ball sball(table, single_letter_words(table), cert.exponent_cap);
      detail::require_no_scalars(sball, "base ball");
      std::vector<BaseLetter> alpha = base_alphabet(sball);
      std::size_t t_index = alpha.size();
      for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i].m == t.matrix()) {
          t_index = i;
          break;
        }
      ScanOutcome pre = pre_scan_base(alpha, t_index, t.projector(), t.w_plus());
      if (!pre.ok) return fail("base element fails the condition: " + pre.violation);

      RationalMatrix p = cert.ell;
      for (int j = 1; j <= 2 * cert.radius; ++j) {
        if (p.is_identity())
          return fail("stable letter has order " + std::to_string(j));
        p = p * cert.ell;
      }

      ScanOutcome out =
          scan_hnn_ball(alpha, t_index, u, t.projector(), t.w_plus(), cert.radius);
      res.checked = pre.checked + out.checked;
      if (!out.ok) return fail("scan found violating word " + out.violation);
      if (res.checked != cert.checked_words)
        return fail("word count mismatch: replay checked " + std::to_string(res.checked) +
                    ", certificate claims " + std::to_string(cert.checked_words));
      return res;
    }
    return fail("unknown certificate kind '" + cert.kind + "'");
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

}  // namespace s2t
