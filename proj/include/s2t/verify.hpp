#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "s2t/ball.hpp"
#include "s2t/errors.hpp"
#include "s2t/involution.hpp"
#include "s2t/matrix.hpp"
#include "s2t/modp.hpp"
#include "s2t/words.hpp"

namespace s2t {

// One named bounded-radius check. Failures always carry replayable witnesses
// (words over the table that re-evaluate to the violating matrices); notes
// flag degenerate inputs and radius-truncation caveats without failing.
struct VerificationReport {
  std::string check;
  bool pass = true;
  std::vector<std::pair<std::string, int>> radii;
  std::vector<std::string> witnesses;
  std::vector<std::string> notes;

  void radius(const std::string& name, int r) { radii.emplace_back(name, r); }
  void fail(const std::string& witness) {
    pass = false;
    witnesses.push_back(witness);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

// One certified transitivity witness: f and the membership witness are words
// over the stage table, f lying in the distinguished subgroup, and
// t*f*v^-1 evaluating to the witness's matrix.
struct LedgerEntry {
  GroupWord v;
  GroupWord f;
  GroupWord witness;
};

namespace vdetail {

inline bool img_involution(const ModMatrix& m, const ModMatrix& id) { return m * m == id; }

// Bucket-probe first, exact confirm second.
inline std::optional<std::size_t> ball_lookup(const Ball& ball, const ModMatrix& img,
                                              const RationalMatrix& m) {
  if (!ball.candidates(img)) return std::nullopt;
  return ball.find(img, m);
}

}  // namespace vdetail

// For every ball element g with no membership witness in the subgroup ball,
// and every nontrivial subgroup-ball element a: g*a*g^-1 must miss the
// subgroup ball entirely.
inline VerificationReport check_malnormal(const GeneratorTable& table,
                                          const std::vector<GroupWord>& a_gens, int radius_g,
                                          int radius_a) {
  VerificationReport rep;
  rep.check = "malnormal";
  rep.radius("group", radius_g);
  rep.radius("subgroup", radius_a);
  Ball gball(table, single_letter_words(table), radius_g);
  Ball aball(table, a_gens, radius_a);
  if (aball.size() == 1) {
    rep.note("subgroup ball is trivial; conjugation condition is vacuous");
    return rep;
  }
  bool any_outside = false;
  for (std::size_t i = 1; i < gball.size(); ++i) {
    const RationalMatrix& g = gball.exact(i);
    if (vdetail::ball_lookup(aball, gball[i].img, g)) continue;
    any_outside = true;
    auto g_inv = inverse(g);
    if (!g_inv) continue;  // cannot happen: determinant-1 generators
    ModMatrix gi = gball[i].img;
    ModMatrix gi_inv = mod_inverse(gi).value();
    for (std::size_t j = 1; j < aball.size(); ++j) {
      ModMatrix cimg = gi * aball[j].img * gi_inv;
      if (!aball.candidates(cimg)) continue;
      RationalMatrix c = g * aball.exact(j) * *g_inv;
      if (aball.find(cimg, c))
        rep.fail("g=" + to_string(gball.table_word(i), table) +
                 " a=" + to_string(aball.table_word(j), table));
    }
  }
  if (!any_outside) rep.note("every ball element lies in the subgroup ball; degenerate input");
  return rep;
}

// No element of the generated ball squares to the identity without being it.
inline VerificationReport check_no_involutions(const GeneratorTable& table,
                                               const std::vector<GroupWord>& gens, int radius) {
  VerificationReport rep;
  rep.check = "no-involutions";
  rep.radius("ball", radius);
  Ball ball(table, gens, radius);
  ModMatrix id = ModMatrix::identity(table.n());
  for (std::size_t i = 1; i < ball.size(); ++i) {
    if (!vdetail::img_involution(ball[i].img, id)) continue;
    const RationalMatrix& m = ball.exact(i);
    if ((m * m).is_identity() && !m.is_identity())
      rep.fail(to_string(ball.table_word(i), table));
  }
  return rep;
}

// Re-check every ledger entry from scratch: the stored witness word must
// evaluate to t*f*v^-1, and that matrix must lie in the subgroup ball. Also
// reports how much of the enumeration ball is currently covered by some
// witness, as a progress statistic.
inline VerificationReport check_sharp2trans_witnesses(const GeneratorTable& table,
                                                      const RationalMatrix& t_mat,
                                                      const std::vector<GroupWord>& a_gens,
                                                      const std::vector<LedgerEntry>& ledger,
                                                      int radius, int coverage_radius = 2) {
  VerificationReport rep;
  rep.check = "transitivity-witnesses";
  rep.radius("subgroup", radius);
  rep.radius("coverage", coverage_radius);
  if (ledger.empty()) {
    rep.fail("ledger is empty");
    return rep;
  }
  Ball aball(table, a_gens, radius);
  for (const LedgerEntry& e : ledger) {
    RationalMatrix w =
        t_mat * evaluate(e.f, table) * evaluate(e.v.inverse(), table);
    if (!(evaluate(e.witness, table) == w)) {
      rep.fail("stored witness word does not evaluate to t*f*v^-1 for v=" +
               to_string(e.v, table));
      continue;
    }
    if (!aball.find(w))
      rep.fail("t*f*v^-1 misses the subgroup ball for v=" + to_string(e.v, table));
  }
  // Coverage: fraction of enumeration-ball elements v admitting any f in the
  // subgroup ball with t*f*v^-1 back in the subgroup ball.
  Ball gball(table, single_letter_words(table), coverage_radius);
  ModMatrix t_img = ModMatrix::reduce(t_mat);
  std::vector<RationalMatrix> tf;
  std::vector<ModMatrix> tf_img;
  for (std::size_t j = 0; j < aball.size(); ++j) {
    tf.push_back(t_mat * aball.exact(j));
    tf_img.push_back(t_img * aball[j].img);
  }
  std::size_t covered = 0, total = 0;
  for (std::size_t i = 0; i < gball.size(); ++i) {
    if (vdetail::ball_lookup(aball, gball[i].img, gball.exact(i))) continue;  // degenerate pair
    ++total;
    RationalMatrix v_inv = gball.exact_inverse(i);
    ModMatrix v_inv_img = mod_inverse(gball[i].img).value();
    for (std::size_t j = 0; j < aball.size(); ++j) {
      ModMatrix wimg = tf_img[j] * v_inv_img;
      if (!aball.candidates(wimg)) continue;
      if (aball.find(wimg, tf[j] * v_inv)) {
        ++covered;
        break;
      }
    }
  }
  rep.note("witness coverage " + std::to_string(covered) + "/" + std::to_string(total) +
           " at radius " + std::to_string(coverage_radius));
  return rep;
}

// Partial Schreier graph of right cosets of the subgroup: representatives are
// the first (hence length-lex minimal) ball words in each coset,
// identification Ag = Ag' iff g*g'^-1 has a membership witness at the larger
// membership radius.
struct ActionBall {
  struct Coset {
    GroupWord rep;
    RationalMatrix m;
    RationalMatrix m_inv;
    ModMatrix img;
    ModMatrix img_inv;
  };
  std::vector<Coset> cosets;
  // edges[c][2*gen + (dir<0)] = coset reached from c by that generator, when
  // the product still identifies inside the ball.
  std::vector<std::vector<std::optional<std::size_t>>> edges;
  int radius_cosets = 0;
  int radius_membership = 0;
};

inline ActionBall build_action_ball(const GeneratorTable& table,
                                    const std::vector<GroupWord>& a_gens, int radius_cosets,
                                    int radius_membership) {
  ActionBall ab;
  ab.radius_cosets = radius_cosets;
  ab.radius_membership = radius_membership;
  Ball aball(table, a_gens, radius_membership);
  Ball gball(table, single_letter_words(table), radius_cosets);

  auto coset_of = [&](const RationalMatrix& m, const ModMatrix& img) -> std::optional<std::size_t> {
    for (std::size_t j = 0; j < ab.cosets.size(); ++j) {
      ModMatrix q_img = img * ab.cosets[j].img_inv;
      if (!aball.candidates(q_img)) continue;
      if (aball.find(q_img, m * ab.cosets[j].m_inv)) return j;
    }
    return std::nullopt;
  };

  for (std::size_t i = 0; i < gball.size(); ++i) {
    const RationalMatrix& m = gball.exact(i);
    if (coset_of(m, gball[i].img)) continue;
    ActionBall::Coset c;
    c.rep = gball.table_word(i);
    c.m = m;
    c.m_inv = gball.exact_inverse(i);
    c.img = gball[i].img;
    c.img_inv = mod_inverse(c.img).value();
    ab.cosets.push_back(std::move(c));
  }

  ab.edges.assign(ab.cosets.size(),
                  std::vector<std::optional<std::size_t>>(2 * table.size(), std::nullopt));
  for (std::size_t j = 0; j < ab.cosets.size(); ++j)
    for (std::size_t k = 0; k < table.size(); ++k)
      for (int d = 0; d < 2; ++d) {
        const RationalMatrix& step = d == 0 ? table[k].m : table[k].m_inv;
        const ModMatrix& step_img = d == 0 ? table[k].img : table[k].img_inv;
        ab.edges[j][2 * k + d] = coset_of(ab.cosets[j].m * step, ab.cosets[j].img * step_img);
      }
  return ab;
}

// No involution of the group ball may fix any coset of the action ball:
// fixing means rep*w*rep^-1 has a subgroup membership witness.
inline VerificationReport check_pchar2(const GeneratorTable& table,
                                       const std::vector<GroupWord>& a_gens,
                                       const ActionBall& ab) {
  VerificationReport rep;
  rep.check = "pchar2";
  rep.radius("cosets", ab.radius_cosets);
  rep.radius("membership", ab.radius_membership);
  Ball gball(table, single_letter_words(table), ab.radius_cosets);
  Ball aball(table, a_gens, ab.radius_membership);
  ModMatrix id = ModMatrix::identity(table.n());
  std::size_t involutions = 0;
  for (std::size_t i = 1; i < gball.size(); ++i) {
    if (!vdetail::img_involution(gball[i].img, id)) continue;
    const RationalMatrix& w = gball.exact(i);
    if (!(w * w).is_identity() || w.is_identity()) continue;
    ++involutions;
    for (const ActionBall::Coset& c : ab.cosets) {
      ModMatrix qimg = c.img * gball[i].img * c.img_inv;
      if (!aball.candidates(qimg)) continue;
      if (aball.find(qimg, c.m * w * c.m_inv))
        rep.fail("involution " + to_string(gball.table_word(i), table) + " fixes coset " +
                 to_string(c.rep, table));
    }
  }
  if (involutions == 0) rep.note("no involutions in the ball at this radius");
  else rep.note(std::to_string(involutions) + " involutions examined");
  return rep;
}

namespace vdetail {

// y a small power of x (or vice versa), within +-bound.
inline bool ball_power_related(const RationalMatrix& x, const RationalMatrix& y, int bound) {
  RationalMatrix p = x;
  auto x_inv = inverse(x);
  RationalMatrix q = *x_inv;
  for (int k = 1; k <= bound; ++k) {
    if (p == y || q == y) return true;
    p = p * x;
    q = q * *x_inv;
  }
  return false;
}

}  // namespace vdetail

// Split-type diagnostic: a pair of nontrivial commuting elements with
// distinct cyclic parts whose ball-conjugacy closures still commute
// elementwise is evidence for a pair of commuting normal subgroups. Finding
// such a pair fails the check; bounded radii mean absence proves nothing.
inline VerificationReport check_commuting_normal_ball(const GeneratorTable& table, int radius) {
  VerificationReport rep;
  rep.check = "commuting-normal-ball";
  rep.radius("ball", radius);
  Ball ball(table, single_letter_words(table), radius);

  auto closure = [&](std::size_t i) {
    std::vector<std::size_t> cl;
    for (std::size_t g = 0; g < ball.size(); ++g) {
      ModMatrix cimg = ball[g].img * ball[i].img * mod_inverse(ball[g].img).value();
      if (!ball.candidates(cimg)) continue;
      RationalMatrix c = ball.exact(g) * ball.exact(i) * ball.exact_inverse(g);
      if (auto at = ball.find(cimg, c)) cl.push_back(*at);
    }
    return cl;
  };

  for (std::size_t i = 1; i < ball.size(); ++i) {
    for (std::size_t j = i + 1; j < ball.size(); ++j) {
      if (!(ball[i].img * ball[j].img == ball[j].img * ball[i].img)) continue;
      const RationalMatrix& x = ball.exact(i);
      const RationalMatrix& y = ball.exact(j);
      if (!(x * y == y * x)) continue;
      if (vdetail::ball_power_related(x, y, 2 * radius)) continue;
      std::vector<std::size_t> cx = closure(i), cy = closure(j);
      bool all_commute = true;
      for (std::size_t u : cx) {
        for (std::size_t v : cy)
          if (!(ball.exact(u) * ball.exact(v) == ball.exact(v) * ball.exact(u))) {
            all_commute = false;
            break;
          }
        if (!all_commute) break;
      }
      if (all_commute)
        rep.fail("x=" + to_string(ball.table_word(i), table) +
                 " y=" + to_string(ball.table_word(j), table) +
                 " closures of sizes " + std::to_string(cx.size()) + "," +
                 std::to_string(cy.size()) + " commute elementwise");
    }
  }
  return rep;
}

// The embedded original pair survives: within the stated radii, the first
// factor's ball meets the grown subgroup's ball exactly in the original
// subgroup's ball, and the first factor's orbit of the base coset matches the
// standalone coset ball of the original pair, edge for edge.
inline VerificationReport check_embedded_action(const GeneratorTable& table, std::size_t h_begin,
                                                std::size_t h_count, std::size_t a0_count,
                                                const std::vector<GroupWord>& a_gens, int radius,
                                                int radius_membership) {
  VerificationReport rep;
  rep.check = "embedded-action";
  rep.radius("ball", radius);
  rep.radius("membership", radius_membership);
  if (h_count == 0) {
    rep.fail("no first-factor generators recorded");
    return rep;
  }
  std::vector<GroupWord> h_words;
  for (std::size_t k = 0; k < h_count; ++k) h_words.push_back(GroupWord::letter(h_begin + k));
  std::vector<GroupWord> a0(a_gens.begin(), a_gens.begin() + a0_count);

  Ball hball(table, h_words, radius);
  Ball a1ball(table, a_gens, radius_membership);
  Ball a0ball(table, a0, radius);

  for (std::size_t i = 1; i < hball.size(); ++i) {
    const RationalMatrix& m = hball.exact(i);
    bool in_a1 = vdetail::ball_lookup(a1ball, hball[i].img, m).has_value();
    bool in_a0 = vdetail::ball_lookup(a0ball, hball[i].img, m).has_value();
    if (in_a1 && !in_a0)
      rep.fail("first-factor element " + to_string(hball.table_word(i), table) +
               " enters the grown subgroup but not the original one");
  }
  for (std::size_t i = 1; i < a0ball.size(); ++i) {
    const RationalMatrix& m = a0ball.exact(i);
    if (!vdetail::ball_lookup(a1ball, a0ball[i].img, m))
      rep.fail("original subgroup element " + to_string(a0ball.table_word(i), table) +
               " missing from the grown subgroup ball");
  }

  // Graph comparison: orbit of the base coset under first-factor edges vs the
  // coset ball of the original pair built standalone over the same matrices.
  GeneratorTable htab;
  for (std::size_t k = 0; k < h_count; ++k)
    htab.add(table[h_begin + k].name, Factor::Base, table[h_begin + k].m);
  std::vector<GroupWord> a0_sub;
  for (const GroupWord& w : a0) {
    GroupWord s;
    for (const auto& y : w.syls) {
      if (y.gen < h_begin || y.gen >= h_begin + h_count) {
        rep.fail("original subgroup word " + to_string(w, table) +
                 " uses letters outside the first factor");
        return rep;
      }
      s.append(y.gen - h_begin, y.pow);
    }
    a0_sub.push_back(std::move(s));
  }

  ActionBall big = build_action_ball(table, a_gens, radius, radius_membership);
  ActionBall small = build_action_ball(htab, a0_sub, radius, radius_membership);

  // Parallel BFS from the base pair along first-factor edges; every edge
  // defined on both sides must close the square (this is equivariance of the
  // inclusion of coset spaces).
  std::vector<std::optional<std::size_t>> paired(big.cosets.size());
  std::vector<std::optional<std::size_t>> paired_rev(small.cosets.size());
  std::vector<std::pair<std::size_t, std::size_t>> queue{{0, 0}};
  paired[0] = 0;
  paired_rev[0] = 0;
  std::size_t matched_edges = 0;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    auto [bx, sx] = queue[q];
    for (std::size_t k = 0; k < h_count; ++k)
      for (int d = 0; d < 2; ++d) {
        auto be = big.edges[bx][2 * (h_begin + k) + d];
        auto se = small.edges[sx][2 * k + d];
        if (!be || !se) continue;  // frontier on one side
        if (paired[*be] && paired_rev[*se]) {
          if (*paired[*be] != *se)
            rep.fail("coset graphs disagree at " + to_string(big.cosets[bx].rep, table) +
                     " along " + table[h_begin + k].name);
          ++matched_edges;
          continue;
        }
        if (paired[*be] || paired_rev[*se]) {
          rep.fail("coset pairing conflict at " + to_string(big.cosets[bx].rep, table) +
                   " along " + table[h_begin + k].name);
          continue;
        }
        paired[*be] = *se;
        paired_rev[*se] = *be;
        queue.emplace_back(*be, *se);
        ++matched_edges;
      }
  }
  rep.note("paired " + std::to_string(queue.size()) + " orbit cosets, " +
           std::to_string(matched_edges) + " edges; standalone ball has " +
           std::to_string(small.cosets.size()) + " cosets");
  return rep;
}

}  // namespace s2t
