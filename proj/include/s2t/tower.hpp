#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "s2t/ball.hpp"
#include "s2t/embed.hpp"
#include "s2t/errors.hpp"
#include "s2t/involution.hpp"
#include "s2t/rng.hpp"
#include "s2t/verify.hpp"
#include "s2t/words.hpp"

namespace s2t {

// One recorded construction event. Non-embedding events (a candidate already
// witnessed, or one skipped as out of scope) carry no certificate.
struct StepRecord {
  std::string kind;  // "bootstrap", "already-witnessed", "free", "hnn", "needs-reduction"
  GroupWord v;       // candidate handled (empty for bootstrap)
  std::string detail;
  bool has_cert = false;
  EmbeddingCertificate cert;
};

// Current stage of the construction. The generator table only grows, and the
// first 1 + h_count letters (the pivot involution t, then the embedded copy
// of the starting group) are the permanent base; a_gens are words over the
// table generating the distinguished point stabilizer.
struct TowerState {
  GeneratorTable table;
  std::size_t h_count = 0;   // table[1..1+h_count) is the embedded first group
  std::size_t a0_count = 0;  // leading a_gens that came from the original pair
  std::vector<GroupWord> a_gens;
  RationalMatrix t_mat;
  std::vector<LedgerEntry> ledger;
  std::vector<StepRecord> history;
  std::vector<GroupWord> processed;  // candidates handled, including skipped ones
  std::uint64_t seed = 0;
  int stage = 0;  // completed ledger-extending steps

  std::size_t n() const { return table.n(); }
  Involution t() const { return Involution::make(t_mat); }
};

struct TowerOpts {
  int exponent_cap = 3;  // alphabet ball radius feeding the scans
  int conj_radius = 4;   // radius for involution-conjugacy searches
  EmbedOpts embed;
};

namespace tdetail {

inline std::string next_letter_name(const TowerState& st) {
  std::size_t adjoined = st.table.size() - 1 - st.h_count;
  std::string name = "f" + std::to_string(adjoined + 1);
  while (st.table.find(name)) name += "_";
  return name;
}

inline std::vector<std::pair<std::string, RationalMatrix>> table_gens(const GeneratorTable& t) {
  std::vector<std::pair<std::string, RationalMatrix>> out;
  for (std::size_t i = 0; i < t.size(); ++i) out.emplace_back(t[i].name, t[i].m);
  return out;
}

// Post-adjunction certification shared by every growing step: the projected
// restriction to the fixed space stays non-scalar for every ball word outside
// {1, t}, and every ball involution is conjugate to t within the conjugacy
// radius. Failure means the finite evidence does not support the step.
inline void certify_stage(const TowerState& st, int radius, const TowerOpts& opts,
                          EmbeddingCertificate& cert, const std::string& stage_name) {
  Involution t = st.t();
  ConditionReport aux = verify_aux_condition(st.table, t, radius);
  if (!aux.all())
    throw SearchError("stage-certification-failed: " + stage_name + " aux condition, witness " +
                      aux.first_failure()->witness);
  ConditionReport inv = check_involutions_conjugate_ball(st.table, t, radius, opts.conj_radius);
  if (!inv.all())
    throw SearchError("stage-certification-failed: " + stage_name +
                      " involution not conjugate to the pivot, witness " +
                      inv.first_failure()->witness);
  cert.involution_conjugacy_radius = opts.conj_radius;
}

}  // namespace tdetail

// Stand up the base pair: conjugate the starting group into scan-certified
// position against the pivot involution t = diag(1..1,-1..-1) and assemble
// the state. Precondition failures name their witnesses; the determinant
// constraint (even negative eigenspace) is checked before any work.
inline TowerState bootstrap(const std::vector<std::pair<std::string, RationalMatrix>>& h_gens,
                            const std::vector<GroupWord>& a_words, std::size_t r, int radius,
                            std::uint64_t seed, const TowerOpts& opts = {}) {
  if (h_gens.empty()) throw InputError("bootstrap: no generators for the starting group");
  const std::size_t n = h_gens[0].second.n();
  if (r > n) throw InputError("bootstrap: fixed-space dimension exceeds the ambient dimension");
  if ((n - r) % 2 != 0)
    throw InputError(
        "bootstrap: n-r must be even, otherwise t has determinant -1 and leaves the group "
        "(determinant constraint)");
  if (r < (n - r) + 2)
    throw InputError("bootstrap: need r >= (n-r)+2 so the fixed space dominates the split");

  GeneratorTable htab;
  for (const auto& [name, m] : h_gens) htab.add(name, Factor::Base, m);
  for (const GroupWord& w : a_words)
    for (const auto& y : w.syls)
      if (y.gen >= htab.size())
        throw InputError("bootstrap: subgroup word uses an unknown generator index");

  Ball hball(htab, single_letter_words(htab), radius);
  for (std::size_t i = 1; i < hball.size(); ++i) {
    const RationalMatrix& m = hball.exact(i);
    if (m.is_scalar())
      throw InputError("bootstrap: starting group ball contains the nontrivial scalar " +
                       to_string(hball.table_word(i), htab));
    if ((m * m).is_identity())
      throw InputError("bootstrap: starting group ball contains the involution " +
                       to_string(hball.table_word(i), htab));
  }
  VerificationReport mal = check_malnormal(htab, a_words, radius, radius);
  if (!mal.pass)
    throw InputError("bootstrap: subgroup is not malnormal in the starting group, witness " +
                     mal.witnesses.front());

  RationalMatrix t0 = block_involution(n, r);
  Involution t = Involution::make(t0);
  FreeEmbedding fe =
      embed_free_product({{"t", t0}}, h_gens, Projector::from_involution(t), radius,
                         opts.exponent_cap, derive_seed(seed, "bootstrap", 0), opts.embed);
  auto f_inv = inverse(fe.f).value();

  TowerState st;
  st.table.add("t", Factor::Base, t0);
  for (const auto& [name, m] : h_gens) st.table.add(name, Factor::Base, fe.f * m * f_inv);
  st.h_count = h_gens.size();
  st.a0_count = a_words.size();
  for (const GroupWord& w : a_words) {
    GroupWord s;
    for (const auto& y : w.syls) s.append(y.gen + 1, y.pow);
    st.a_gens.push_back(std::move(s));
  }
  st.t_mat = t0;
  st.seed = seed;

  StepRecord rec;
  rec.kind = "bootstrap";
  rec.detail = "pivot t adjoined, starting group conjugated";
  rec.has_cert = true;
  rec.cert = fe.cert;
  tdetail::certify_stage(st, radius, opts, rec.cert, "bootstrap");
  VerificationReport mal_g = check_malnormal(st.table, st.a_gens, radius, radius);
  if (!mal_g.pass)
    throw SearchError("stage-certification-failed: bootstrap malnormality, witness " +
                      mal_g.witnesses.front());
  st.history.push_back(std::move(rec));
  return st;
}

// Bounded-radius classification of a candidate v (Prop-style routing):
//   - AlreadyWitnessed: some f in the subgroup ball has t*f*v^-1 back in it;
//   - NeedsReduction: v or v^-1 visibly lies in (subgroup)*t*(subgroup), or
//     a non-involution v has v^-1 visibly in (subgroup)*v*(subgroup); the
//     reduction handling such candidates is out of scope, so they are logged;
//   - HnnCase: v is an involution clear of those obstructions;
//   - FreeCase: everything else clear of them.
// All routing is on *absence* of ball witnesses and is therefore bounded
// evidence, not proof; the verify checks after each step are the safety net.
struct Classification {
  enum class Kind { AlreadyWitnessed, FreeCase, HnnCase, NeedsReduction };
  Kind kind = Kind::NeedsReduction;
  GroupWord f;        // AlreadyWitnessed: witnessing subgroup element (table word)
  GroupWord witness;  // AlreadyWitnessed: t*f*v^-1 as a subgroup-ball table word
  std::string reason;
};

inline Classification classify(const GroupWord& v, const TowerState& st, int radius) {
  Classification out;
  RationalMatrix v_m = evaluate(v, st.table);
  RationalMatrix v_inv = evaluate(v.inverse(), st.table);
  ModMatrix v_img = ModMatrix::reduce(v_m);
  ModMatrix v_inv_img = ModMatrix::reduce(v_inv);
  ModMatrix t_img = ModMatrix::reduce(st.t_mat);
  Ball aball(st.table, st.a_gens, radius);

  for (std::size_t j = 0; j < aball.size(); ++j) {
    ModMatrix wimg = t_img * aball[j].img * v_inv_img;
    if (!aball.candidates(wimg)) continue;
    RationalMatrix w = st.t_mat * aball.exact(j) * v_inv;
    if (auto at = aball.find(wimg, w)) {
      out.kind = Classification::Kind::AlreadyWitnessed;
      out.f = aball.table_word(j);
      out.witness = aball.table_word(*at);
      return out;
    }
  }

  std::vector<ModMatrix> at_img;
  at_img.reserve(aball.size());
  for (std::size_t j = 0; j < aball.size(); ++j) at_img.push_back(aball[j].img * t_img);
  for (std::size_t j = 0; j < aball.size(); ++j)
    for (std::size_t k = 0; k < aball.size(); ++k) {
      ModMatrix p = at_img[j] * aball[k].img;
      bool hit_v = p == v_img, hit_vi = p == v_inv_img;
      if (!hit_v && !hit_vi) continue;
      RationalMatrix q = aball.exact(j) * st.t_mat * aball.exact(k);
      if ((hit_v && q == v_m) || (hit_vi && q == v_inv)) {
        out.kind = Classification::Kind::NeedsReduction;
        out.reason = "candidate lies in subgroup*t*subgroup: a1=" +
                     to_string(aball.table_word(j), st.table) +
                     " a2=" + to_string(aball.table_word(k), st.table);
        return out;
      }
    }

  if ((v_m * v_m).is_identity()) {
    out.kind = Classification::Kind::HnnCase;
    return out;
  }

  for (std::size_t j = 0; j < aball.size(); ++j)
    for (std::size_t k = 0; k < aball.size(); ++k) {
      ModMatrix p = aball[j].img * v_img * aball[k].img;
      if (!(p == v_inv_img)) continue;
      if (aball.exact(j) * v_m * aball.exact(k) == v_inv) {
        out.kind = Classification::Kind::NeedsReduction;
        out.reason = "inverse of candidate lies in subgroup*v*subgroup: a1=" +
                     to_string(aball.table_word(j), st.table) +
                     " a2=" + to_string(aball.table_word(k), st.table);
        return out;
      }
    }

  out.kind = Classification::Kind::FreeCase;
  return out;
}

// Adjoin a fresh free letter for candidate v: realize it as a conjugated
// unipotent certified against the whole current group, extend the subgroup by
// the letter and by t*letter*v^-1, and ledger (v, letter). The input state is
// untouched on failure.
inline TowerState step_free(const TowerState& st, const GroupWord& v, int radius,
                            std::uint64_t seed, const TowerOpts& opts = {}) {
  std::string name = tdetail::next_letter_name(st);
  RationalMatrix c = RationalMatrix::identity(st.n());
  c.at(0, 1) = Rational(1);
  FreeEmbedding fe = embed_free_product(tdetail::table_gens(st.table), {{name, c}},
                                        Projector::from_involution(st.t()), radius,
                                        opts.exponent_cap, seed, opts.embed);
  RationalMatrix letter = fe.f * c * inverse(fe.f).value();

  TowerState out = st;
  std::size_t li = out.table.add(name, Factor::Base, letter);
  GroupWord f_word = GroupWord::letter(li);
  GroupWord wit = GroupWord::letter(0).concat(f_word).concat(v.inverse()).reduced();
  out.a_gens.push_back(f_word);
  out.a_gens.push_back(wit);
  out.ledger.push_back({v, f_word, wit});
  out.processed.push_back(v);
  out.stage += 1;

  StepRecord rec;
  rec.kind = "free";
  rec.v = v;
  rec.detail = "adjoined free letter " + name;
  rec.has_cert = true;
  rec.cert = fe.cert;
  tdetail::certify_stage(out, radius, opts, rec.cert, "free step");
  out.history.push_back(std::move(rec));
  return out;
}

// Adjoin a stable letter for an involution candidate v: realize ell with
// ell^-1 t ell = v, extend the subgroup by the letter, and ledger (v, letter)
// — t*ell*v^-1 = ell from the relation, so the letter is its own membership
// witness. The input state is untouched on failure.
inline TowerState step_hnn(const TowerState& st, const GroupWord& v, int radius,
                           std::uint64_t seed, const TowerOpts& opts = {}) {
  std::string name = tdetail::next_letter_name(st);
  RationalMatrix v_m = evaluate(v, st.table);
  EmbedOpts eo = opts.embed;
  eo.conj_radius = opts.conj_radius;
  HnnEmbedding he = embed_hnn(tdetail::table_gens(st.table), st.t(), v_m, radius,
                              opts.exponent_cap, seed, eo);
  if (!(st.t_mat * he.ell == he.ell * v_m))
    throw SearchError("stage-certification-failed: stable letter relation does not hold");

  TowerState out = st;
  std::size_t li = out.table.add(name, Factor::Base, he.ell);
  GroupWord f_word = GroupWord::letter(li);
  out.a_gens.push_back(f_word);
  out.ledger.push_back({v, f_word, f_word});
  out.processed.push_back(v);
  out.stage += 1;

  StepRecord rec;
  rec.kind = "hnn";
  rec.v = v;
  rec.detail = "adjoined stable letter " + name;
  rec.has_cert = true;
  rec.cert = he.cert;
  tdetail::certify_stage(out, radius, opts, rec.cert, "extension step");
  out.history.push_back(std::move(rec));
  return out;
}

struct TowerBudget {
  int stages = 0;        // absolute target for the stage counter
  int enum_radius = 2;   // candidate enumeration ball
  int cert_radius = 4;   // word-ball radius for scans and stage certification
  int classify_radius = 4;
  TowerOpts opts;
};

struct StageReport {
  struct Row {
    GroupWord v;
    std::string action;
    std::string detail;
  };
  std::vector<Row> rows;
  int stages_completed = 0;
  bool exhausted = false;  // enumeration ran dry before the stage target
};

// Drive the construction to the absolute stage target: enumerate candidates
// of the current ball in breadth-first order, skip the ones already handled
// or inside the subgroup ball, classify, and apply the matching step.
// Candidates needing the out-of-scope reduction are logged and skipped
// without consuming budget. Steps mutate the state only on success, so the
// state is resumable after any failure.
inline StageReport run_tower(TowerState& st, const TowerBudget& budget) {
  StageReport rep;
  while (st.stage < budget.stages) {
    std::vector<RationalMatrix> done;
    done.reserve(st.processed.size());
    for (const GroupWord& w : st.processed) done.push_back(evaluate(w, st.table));

    Ball gball(st.table, single_letter_words(st.table), budget.enum_radius);
    Ball aball(st.table, st.a_gens, budget.classify_radius);
    std::optional<GroupWord> pick;
    for (std::size_t i = 1; i < gball.size() && !pick; ++i) {
      const RationalMatrix& m = gball.exact(i);
      bool seen = false;
      for (const RationalMatrix& d : done)
        if (d == m) {
          seen = true;
          break;
        }
      if (seen) continue;
      if (aball.candidates(gball[i].img) && aball.find(gball[i].img, m)) continue;
      pick = gball.table_word(i);
    }
    if (!pick) {
      rep.exhausted = true;
      break;
    }

    std::uint64_t seed_k = derive_seed(st.seed, "stage", static_cast<std::uint64_t>(st.stage));
    Classification cls = classify(*pick, st, budget.classify_radius);
    switch (cls.kind) {
      case Classification::Kind::AlreadyWitnessed: {
        st.ledger.push_back({*pick, cls.f, cls.witness});
        st.processed.push_back(*pick);
        st.stage += 1;
        StepRecord rec;
        rec.kind = "already-witnessed";
        rec.v = *pick;
        rec.detail = "f=" + to_string(cls.f, st.table);
        st.history.push_back(rec);
        rep.rows.push_back({*pick, "already-witnessed", rec.detail});
        break;
      }
      case Classification::Kind::FreeCase:
        st = step_free(st, *pick, budget.cert_radius, seed_k, budget.opts);
        rep.rows.push_back({*pick, "free", st.history.back().detail});
        break;
      case Classification::Kind::HnnCase:
        st = step_hnn(st, *pick, budget.cert_radius, seed_k, budget.opts);
        rep.rows.push_back({*pick, "hnn", st.history.back().detail});
        break;
      case Classification::Kind::NeedsReduction: {
        st.processed.push_back(*pick);
        StepRecord rec;
        rec.kind = "needs-reduction";
        rec.v = *pick;
        rec.detail = cls.reason;
        st.history.push_back(rec);
        rep.rows.push_back({*pick, "needs-reduction", cls.reason});
        break;
      }
    }
  }
  rep.stages_completed = st.stage;
  return rep;
}

}  // namespace s2t
