#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "s2t/errors.hpp"
#include "s2t/matrix.hpp"
#include "s2t/modp.hpp"

namespace s2t {

// Role a named letter had when it entered the table: plain base-group letter,
// adjoined free letter, or stable letter of a relation step. Enumeration
// treats every earlier letter as base; the tag is provenance.
enum class Factor { Base, Free, Stable };

inline std::string factor_name(Factor f) {
  switch (f) {
    case Factor::Base: return "base";
    case Factor::Free: return "free";
    case Factor::Stable: return "stable";
  }
  return "?";
}

inline Factor factor_from_name(const std::string& s) {
  if (s == "base") return Factor::Base;
  if (s == "free") return Factor::Free;
  if (s == "stable") return Factor::Stable;
  throw InputError("generator-table: unknown factor tag '" + s + "'");
}

struct Generator {
  std::string name;
  Factor role;
  RationalMatrix m;
  RationalMatrix m_inv;
  ModMatrix img;
  ModMatrix img_inv;
};

// Named determinant-one matrices. Inverses and residue images are computed
// once at insertion; evaluation of a formal inverse is exact by construction.
class GeneratorTable {
 public:
  std::size_t add(const std::string& name, Factor role, const RationalMatrix& m) {
    if (index_.count(name)) throw InputError("generator-table: duplicate name '" + name + "'");
    if (name.empty()) throw InputError("generator-table: empty name");
    if (n_ == 0) n_ = m.n();
    if (m.n() != n_) throw InputError("generator-table: dimension mismatch for '" + name + "'");
    if (det(m) != Rational(1))
      throw InputError("generator-table: determinant of '" + name + "' is not 1");
    Generator g;
    g.name = name;
    g.role = role;
    g.m = m;
    auto inv = inverse(m);
    if (!inv) throw InputError("generator-table: singular matrix for '" + name + "'");
    g.m_inv = *inv;
    g.img = ModMatrix::reduce(m);
    g.img_inv = ModMatrix::reduce(g.m_inv);
    gens_.push_back(std::move(g));
    index_[name] = gens_.size() - 1;
    return gens_.size() - 1;
  }

  std::size_t size() const { return gens_.size(); }
  std::size_t n() const { return n_; }
  const Generator& operator[](std::size_t i) const { return gens_.at(i); }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require(const std::string& name) const {
    auto i = find(name);
    if (!i) throw InputError("missing-assignment: generator '" + name + "'");
    return *i;
  }

  std::vector<std::size_t> base_indices() const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].role == Factor::Base) v.push_back(i);
    return v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Generator> gens_;
  std::map<std::string, std::size_t> index_;
};

// Word over an indexed alphabet (a table, or a list of subgroup generators).
// Reduction here merges adjacent powers of the same letter only; no group
// relations are applied at this layer.
struct GroupWord {
  struct Syl {
    std::size_t gen;
    long pow;
  };
  std::vector<Syl> syls;

  static GroupWord empty() { return {}; }
  static GroupWord letter(std::size_t g, long p = 1) { return {{{g, p}}}; }

  bool is_empty() const { return syls.empty(); }

  long letter_length() const {
    long s = 0;
    for (const auto& y : syls) s += y.pow < 0 ? -y.pow : y.pow;
    return s;
  }

  GroupWord& append(std::size_t g, long p) {
    if (p == 0) return *this;
    if (!syls.empty() && syls.back().gen == g) {
      syls.back().pow += p;
      if (syls.back().pow == 0) syls.pop_back();
      return *this;
    }
    syls.push_back({g, p});
    return *this;
  }

  GroupWord reduced() const {
    GroupWord r;
    for (const auto& y : syls) r.append(y.gen, y.pow);
    return r;
  }

  GroupWord inverse() const {
    GroupWord r;
    for (auto it = syls.rbegin(); it != syls.rend(); ++it) r.append(it->gen, -it->pow);
    return r;
  }

  GroupWord concat(const GroupWord& o) const {
    GroupWord r = *this;
    for (const auto& y : o.syls) r.append(y.gen, y.pow);
    return r;
  }

  friend bool operator==(const GroupWord& a, const GroupWord& b) {
    if (a.syls.size() != b.syls.size()) return false;
    for (std::size_t i = 0; i < a.syls.size(); ++i)
      if (a.syls[i].gen != b.syls[i].gen || a.syls[i].pow != b.syls[i].pow) return false;
    return true;
  }
};

inline RationalMatrix evaluate(const GroupWord& w, const GeneratorTable& t) {
  RationalMatrix acc = RationalMatrix::identity(t.n());
  for (const auto& y : w.syls) {
    const Generator& g = t[y.gen];
    const RationalMatrix& step = y.pow > 0 ? g.m : g.m_inv;
    long reps = y.pow > 0 ? y.pow : -y.pow;
    for (long i = 0; i < reps; ++i) acc = acc * step;
  }
  return acc;
}

inline ModMatrix evaluate_mod(const GroupWord& w, const GeneratorTable& t) {
  ModMatrix acc = ModMatrix::identity(t.n());
  for (const auto& y : w.syls) {
    const Generator& g = t[y.gen];
    const ModMatrix& step = y.pow > 0 ? g.img : g.img_inv;
    long reps = y.pow > 0 ? y.pow : -y.pow;
    for (long i = 0; i < reps; ++i) acc = acc * step;
  }
  return acc;
}

inline std::string to_string(const GroupWord& w, const GeneratorTable& t) {
  if (w.is_empty()) return "1";
  std::string s;
  for (const auto& y : w.syls) {
    if (!s.empty()) s += "*";
    s += t[y.gen].name;
    if (y.pow != 1) s += "^" + std::to_string(y.pow);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Alternating-form words. Base syllables hold group elements as matrices
// (word identity in the base group is matrix identity); the adjoined letter
// appears as a bare power.

struct FreeWord {
  struct Syl {
    int fpow = 0;              // nonzero: a power of the adjoined letter
    RationalMatrix g;          // fpow == 0: a nontrivial base element
    GroupWord label;           // optional display/replay word for g
    bool is_free() const { return fpow != 0; }
  };
  std::vector<Syl> syls;

  std::size_t syllables() const { return syls.size(); }
  bool is_empty() const { return syls.empty(); }
  bool is_pure_base() const { return syls.size() == 1 && !syls[0].is_free(); }
};

using RawFreeLetter = std::variant<RationalMatrix, int>;  // base element | letter power

// Merge to the alternating normal form: adjacent base elements multiply (and
// vanish at identity), adjacent letter powers add (and vanish at zero).
inline FreeWord reduce_free(const std::vector<RawFreeLetter>& raw) {
  FreeWord out;
  auto push_base = [&](const RationalMatrix& g) {
    if (g.is_identity()) {
      return;
    }
    if (!out.syls.empty() && !out.syls.back().is_free()) {
      out.syls.back().g = out.syls.back().g * g;
      out.syls.back().label = {};
      if (out.syls.back().g.is_identity()) out.syls.pop_back();
      return;
    }
    FreeWord::Syl s;
    s.g = g;
    out.syls.push_back(std::move(s));
  };
  auto push_free = [&](int p) {
    if (p == 0) return;
    if (!out.syls.empty() && out.syls.back().is_free()) {
      out.syls.back().fpow += p;
      if (out.syls.back().fpow == 0) out.syls.pop_back();
      return;
    }
    FreeWord::Syl s;
    s.fpow = p;
    out.syls.push_back(std::move(s));
  };
  for (const auto& l : raw) {
    if (std::holds_alternative<int>(l))
      push_free(std::get<int>(l));
    else
      push_base(std::get<RationalMatrix>(l));
  }
  return out;
}

inline RationalMatrix evaluate(const FreeWord& w, const RationalMatrix& ell,
                               const RationalMatrix& ell_inv) {
  RationalMatrix acc = RationalMatrix::identity(ell.n());
  for (const auto& s : w.syls) {
    if (s.is_free()) {
      const RationalMatrix& step = s.fpow > 0 ? ell : ell_inv;
      for (int i = 0; i < (s.fpow > 0 ? s.fpow : -s.fpow); ++i) acc = acc * step;
    } else {
      acc = acc * s.g;
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Stable-letter words g_1 k^{d_1} g_2 ... k^{d_m} g_{m+1} with the relation
// k^-1 t k = t. A pinch is k^-1 {1,t} k or k {1,t} k^-1; reduced words have
// none. Interior identities between same-sign stable letters never appear as
// stored tokens (a run k^j is j bare stable tokens).

struct HnnWord {
  struct Tok {
    int kpow = 0;              // +1 or -1: stable letter; 0: base element
    RationalMatrix g;
    GroupWord label;
    bool is_stable() const { return kpow != 0; }
  };
  std::vector<Tok> toks;

  std::size_t length() const { return toks.size(); }
  bool is_empty() const { return toks.empty(); }
  std::size_t stable_count() const {
    std::size_t c = 0;
    for (const auto& t : toks) c += t.is_stable() ? 1 : 0;
    return c;
  }
  bool is_pure_base() const { return toks.size() == 1 && !toks[0].is_stable(); }
};

using RawHnnLetter = std::variant<RationalMatrix, int>;  // base element | stable step (+1/-1 per unit)

inline HnnWord britton_reduce(const std::vector<RawHnnLetter>& raw, const RationalMatrix& t) {
  HnnWord out;
  auto push_base = [&](const RationalMatrix& g) {
    if (g.is_identity()) return;
    if (!out.toks.empty() && !out.toks.back().is_stable()) {
      out.toks.back().g = out.toks.back().g * g;
      out.toks.back().label = {};
      if (out.toks.back().g.is_identity()) out.toks.pop_back();
      return;
    }
    HnnWord::Tok tok;
    tok.g = g;
    out.toks.push_back(std::move(tok));
  };
  auto push_stable = [&](int d) {
    auto& v = out.toks;
    if (!v.empty() && v.back().is_stable() && v.back().kpow == -d) {
      v.pop_back();  // k^-d k^d with nothing between
      return;
    }
    if (v.size() >= 2 && !v.back().is_stable() && v.back().g == t &&
        v[v.size() - 2].is_stable() && v[v.size() - 2].kpow == -d) {
      // pinch k^-d t k^d -> t (the relation is symmetric in the sign)
      v.pop_back();
      v.pop_back();
      push_base(t);
      return;
    }
    HnnWord::Tok tok;
    tok.kpow = d;
    v.push_back(std::move(tok));
  };
  for (const auto& l : raw) {
    if (std::holds_alternative<int>(l)) {
      int d = std::get<int>(l);
      if (d == 0) continue;
      int step = d > 0 ? 1 : -1;
      for (int i = 0; i < (d > 0 ? d : -d); ++i) push_stable(step);
    } else {
      push_base(std::get<RationalMatrix>(l));
    }
  }
  return out;
}

inline bool is_britton_reduced(const HnnWord& w, const RationalMatrix& t) {
  const auto& v = w.toks;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_stable()) {
      if (v[i].g.is_identity()) return false;
      if (i + 1 < v.size() && !v[i + 1].is_stable()) return false;  // unmerged bases
      continue;
    }
    // k^-1 1 k: stable letters of opposite sign touching
    if (i + 1 < v.size() && v[i + 1].is_stable() && v[i].kpow == -v[i + 1].kpow) return false;
    // k^-1 t k: opposite signs around a base element equal to t
    if (i + 2 < v.size() && !v[i + 1].is_stable() && v[i + 2].is_stable() &&
        v[i].kpow == -v[i + 2].kpow && v[i + 1].g == t)
      return false;
  }
  return true;
}

inline RationalMatrix evaluate(const HnnWord& w, const RationalMatrix& k,
                               const RationalMatrix& k_inv) {
  RationalMatrix acc = RationalMatrix::identity(k.n());
  for (const auto& tok : w.toks) {
    if (tok.is_stable())
      acc = acc * (tok.kpow > 0 ? k : k_inv);
    else
      acc = acc * tok.g;
  }
  return acc;
}

}  // namespace s2t
