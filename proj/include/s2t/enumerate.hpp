#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "s2t/ball.hpp"
#include "s2t/words.hpp"

namespace s2t {

// Alphabet entry for one syllable slot: a nontrivial element with its residue
// image and a rendering for reports.
struct BaseLetter {
  RationalMatrix m;
  ModMatrix img;
  std::string display;
};

// Nontrivial ball elements in ball order (element 0 is the identity).
inline std::vector<BaseLetter> base_alphabet(const Ball& ball) {
  std::vector<BaseLetter> a;
  a.reserve(ball.size() > 0 ? ball.size() - 1 : 0);
  for (std::size_t i = 1; i < ball.size(); ++i)
    a.push_back({ball.exact(i), ball[i].img, to_string(ball.table_word(i), ball.table())});
  return a;
}

struct EnumStats {
  std::uint64_t visited = 0;
};

// ---------------------------------------------------------------------------
// Alternating words of a free product: syllables strictly alternate between
// the two alphabets (both of which hold nontrivial elements only).

struct AltWord {
  struct Syl {
    int side = 0;  // 0 or 1
    std::size_t idx = 0;
  };
  std::vector<Syl> syls;

  bool single_syllable_of(int side) const {
    return syls.size() == 1 && syls[0].side == side;
  }
};

inline RationalMatrix evaluate(const AltWord& w, const std::vector<BaseLetter>& alpha0,
                               const std::vector<BaseLetter>& alpha1) {
  std::size_t n = alpha0.empty() ? alpha1[0].m.n() : alpha0[0].m.n();
  RationalMatrix acc = RationalMatrix::identity(n);
  for (const auto& s : w.syls) acc = acc * (s.side == 0 ? alpha0 : alpha1)[s.idx].m;
  return acc;
}

inline std::string render(const AltWord& w, const std::vector<BaseLetter>& alpha0,
                          const std::vector<BaseLetter>& alpha1) {
  if (w.syls.empty()) return "1";
  std::string out;
  for (const auto& s : w.syls) {
    if (!out.empty()) out += "*";
    const std::string& d = (s.side == 0 ? alpha0 : alpha1)[s.idx].display;
    bool atomic = d.find('*') == std::string::npos;
    out += atomic ? d : "(" + d + ")";
  }
  return out;
}

// Visit every alternating word with <= max_syllables syllables in
// length-lexicographic order (syllable count, then side 0 before side 1 at
// each slot, then alphabet index).  The residue image of the word is carried
// incrementally.  A visitor returning false aborts the walk; the call returns
// false exactly when that happened.
inline bool enumerate_alternating(
    const std::vector<BaseLetter>& alpha0, const std::vector<BaseLetter>& alpha1,
    int max_syllables, const std::function<bool(const AltWord&, const ModMatrix&)>& visit,
    EnumStats* stats = nullptr) {
  const std::size_t n = alpha0.empty() ? (alpha1.empty() ? 0 : alpha1[0].m.n())
                                       : alpha0[0].m.n();
  if (n == 0) return true;

  AltWord w;
  std::vector<ModMatrix> imgs{ModMatrix::identity(n)};
  bool go = true;

  // last = -1 at the start, else the side of the last syllable
  std::function<void(int, int)> rec = [&](int remaining, int last) {
    for (int side = 0; side <= 1 && go; ++side) {
      if (side == last) continue;
      const auto& alpha = side == 0 ? alpha0 : alpha1;
      for (std::size_t ai = 0; ai < alpha.size() && go; ++ai) {
        w.syls.push_back({side, ai});
        imgs.push_back(imgs.back() * alpha[ai].img);
        if (remaining == 1) {
          if (stats) ++stats->visited;
          go = visit(w, imgs.back());
        } else {
          rec(remaining - 1, side);
        }
        imgs.pop_back();
        w.syls.pop_back();
      }
    }
  };
  for (int len = 1; len <= max_syllables && go; ++len) rec(len, -1);
  return go;
}

// ---------------------------------------------------------------------------
// Reduced words of the extension <G, k | k^-1 t k = t>: tokens are base
// letters or k^{+-1}, with no two adjacent base tokens, no k^d k^-d pair, and
// no k^d t k^-d pattern (t squares to the identity, so both signs of that
// pattern pinch down to a shorter word).

struct TokWord {
  struct Tok {
    int kpow = 0;          // +1 / -1 for a stable letter, 0 for a base slot
    std::size_t idx = 0;   // alphabet index when kpow == 0
  };
  std::vector<Tok> toks;

  bool is_pure_base() const { return toks.size() == 1 && toks[0].kpow == 0; }
  std::size_t stable_count() const {
    std::size_t c = 0;
    for (const auto& t : toks) c += t.kpow != 0;
    return c;
  }
};

inline RationalMatrix evaluate(const TokWord& w, const std::vector<BaseLetter>& alpha,
                               const RationalMatrix& k, const RationalMatrix& k_inv) {
  RationalMatrix acc = RationalMatrix::identity(k.n());
  for (const auto& t : w.toks)
    acc = acc * (t.kpow == 0 ? alpha[t.idx].m : (t.kpow > 0 ? k : k_inv));
  return acc;
}

inline std::string render(const TokWord& w, const std::vector<BaseLetter>& alpha,
                          const std::string& kname = "k") {
  if (w.toks.empty()) return "1";
  std::string out;
  for (const auto& t : w.toks) {
    if (!out.empty()) out += "*";
    if (t.kpow == 0) {
      const std::string& d = alpha[t.idx].display;
      bool atomic = d.find('*') == std::string::npos;
      out += atomic ? d : "(" + d + ")";
    } else {
      out += t.kpow > 0 ? kname : kname + "^-1";
    }
  }
  return out;
}

// Visit every reduced token word with <= max_tokens tokens in
// length-lexicographic order (token count, then base slots before k^+1 before
// k^-1).  `t_index` is the alphabet position of the distinguished involution.
inline bool enumerate_hnn_words(
    const std::vector<BaseLetter>& alphabet, const ModMatrix& k_img, std::size_t t_index,
    int max_tokens, const std::function<bool(const TokWord&, const ModMatrix&)>& visit,
    EnumStats* stats = nullptr) {
  const std::size_t n = k_img.n();
  ModMatrix k_inv_img = mod_inverse(k_img).value();

  TokWord w;
  std::vector<ModMatrix> imgs{ModMatrix::identity(n)};
  bool go = true;

  // last: 0 start, 1 base, 2 stable.  last_k_sign: sign of the latest stable
  // token still adjacent or separated from the tail by one base token.
  // last_base: alphabet index of the last token when it is a base slot.
  std::function<void(int, int, int, std::size_t)> rec =
      [&](int remaining, int last, int last_k_sign, std::size_t last_base) {
        if (!go) return;
        if (last != 1) {
          for (std::size_t ai = 0; ai < alphabet.size() && go; ++ai) {
            w.toks.push_back({0, ai});
            imgs.push_back(imgs.back() * alphabet[ai].img);
            if (remaining == 1) {
              if (stats) ++stats->visited;
              go = visit(w, imgs.back());
            } else {
              rec(remaining - 1, 1, last_k_sign, ai);
            }
            imgs.pop_back();
            w.toks.pop_back();
          }
        }
        for (int sign = 1; sign >= -1 && go; sign -= 2) {
          if (last == 2 && last_k_sign == -sign) continue;  // k^d k^-d
          if (last == 1 && last_k_sign == -sign && last_base == t_index)
            continue;  // k^d t k^-d
          w.toks.push_back({sign, 0});
          imgs.push_back(imgs.back() * (sign > 0 ? k_img : k_inv_img));
          if (remaining == 1) {
            if (stats) ++stats->visited;
            go = visit(w, imgs.back());
          } else {
            rec(remaining - 1, 2, sign, last_base);
          }
          imgs.pop_back();
          w.toks.pop_back();
        }
      };
  for (int len = 1; len <= max_tokens && go; ++len) rec(len, 0, 0, alphabet.size());
  return go;
}

}  // namespace s2t
