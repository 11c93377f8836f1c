#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "s2t/words.hpp"

namespace s2t {

// BFS ball of the group generated by a list of words over a table. Elements
// are deduplicated exactly: residue images bucket the candidates, and any
// image hit is confirmed with exact arithmetic before two words are declared
// equal. Insertion order is deterministic (length-lex over the generator
// alphabet), so element 0 is the identity and every element's stored word is
// its first, shortest spelling.
class Ball {
 public:
  struct Element {
    GroupWord gword;  // word over the generating list (indices into gens())
    ModMatrix img;
  };

  Ball(const GeneratorTable& table, std::vector<GroupWord> gens, int radius)
      : table_(&table), gens_(std::move(gens)), radius_(radius) {
    gen_m_.reserve(gens_.size());
    gen_img_.reserve(gens_.size());
    for (const auto& g : gens_) {
      RationalMatrix m = evaluate(g, table);
      gen_img_.push_back({ModMatrix::reduce(m), evaluate_mod(g.inverse(), table)});
      auto inv = inverse(m);
      if (!inv) throw InputError("ball: singular generator");
      gen_m_.push_back({std::move(m), std::move(*inv)});
    }
    Element id;
    id.img = ModMatrix::identity(table.n());
    exact_.push_back(RationalMatrix::identity(table.n()));
    elems_.push_back(std::move(id));
    buckets_[elems_[0].img.hash()].push_back(0);
    grow_();
  }

  std::size_t size() const { return elems_.size(); }
  int radius() const { return radius_; }
  const Element& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<GroupWord>& gens() const { return gens_; }
  const GeneratorTable& table() const { return *table_; }

  // exact matrix of element i, materialized on first use
  const RationalMatrix& exact(std::size_t i) const {
    RationalMatrix& m = exact_[i];
    if (m.n() == 0) m = eval_gword_(elems_[i].gword);
    return m;
  }

  RationalMatrix exact_inverse(std::size_t i) const {
    return eval_gword_(elems_[i].gword.inverse());
  }

  // index of the element exactly equal to q (whose image is qimg), if any
  std::optional<std::size_t> find(const ModMatrix& qimg, const RationalMatrix& q) const {
    auto it = buckets_.find(qimg.hash());
    if (it == buckets_.end()) return std::nullopt;
    for (std::size_t i : it->second)
      if (elems_[i].img == qimg && exact(i) == q) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> find(const RationalMatrix& q) const {
    return find(ModMatrix::reduce(q), q);
  }

  // screen-only lookup: empty result proves q is not in the ball; a hit means
  // "same residue image", which the caller must confirm exactly
  const std::vector<std::size_t>* candidates(const ModMatrix& qimg) const {
    auto it = buckets_.find(qimg.hash());
    if (it == buckets_.end()) return nullptr;
    return &it->second;
  }

  // the element's word rewritten over the table alphabet
  GroupWord table_word(std::size_t i) const {
    GroupWord w;
    for (const auto& syl : elems_[i].gword.syls) {
      const GroupWord& g = gens_[syl.gen];
      long reps = syl.pow > 0 ? syl.pow : -syl.pow;
      for (long r = 0; r < reps; ++r) {
        const GroupWord& step = syl.pow > 0 ? g : g.inverse();
        for (const auto& s : step.syls) w.append(s.gen, s.pow);
      }
    }
    return w;
  }

 private:
  RationalMatrix eval_gword_(const GroupWord& gw) const {
    RationalMatrix acc = RationalMatrix::identity(table_->n());
    for (const auto& syl : gw.syls) {
      const RationalMatrix& step = syl.pow > 0 ? gen_m_[syl.gen].first : gen_m_[syl.gen].second;
      long reps = syl.pow > 0 ? syl.pow : -syl.pow;
      for (long r = 0; r < reps; ++r) acc = acc * step;
    }
    return acc;
  }

  void grow_() {
    std::size_t head = 0;
    std::vector<long> depth{0};
    while (head < elems_.size()) {
      std::size_t cur = head++;
      if (depth[cur] >= radius_) continue;
      for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
        for (int sign = 1; sign >= -1; sign -= 2) {
          const auto& w = elems_[cur].gword;
          if (!w.syls.empty() && w.syls.back().gen == gi &&
              (w.syls.back().pow > 0) == (sign < 0))
            continue;  // immediate backtrack
          ModMatrix img = elems_[cur].img * (sign > 0 ? gen_img_[gi].first : gen_img_[gi].second);
          GroupWord cand = w;
          cand.append(gi, sign);
          if (!insert_(std::move(cand), std::move(img))) continue;
          depth.push_back(depth[cur] + 1);
        }
      }
    }
  }

  // returns true when the candidate is a new element
  bool insert_(GroupWord cand, ModMatrix img) {
    std::uint64_t h = img.hash();
    auto it = buckets_.find(h);
    if (it != buckets_.end()) {
      RationalMatrix cand_exact = eval_gword_(cand);
      for (std::size_t i : it->second)
        if (elems_[i].img == img && exact(i) == cand_exact) return false;
      elems_.push_back({std::move(cand), std::move(img)});
      exact_.push_back(std::move(cand_exact));
      it->second.push_back(elems_.size() - 1);
      return true;
    }
    elems_.push_back({std::move(cand), std::move(img)});
    exact_.push_back(RationalMatrix());
    buckets_[h].push_back(elems_.size() - 1);
    return true;
  }

  const GeneratorTable* table_;
  std::vector<GroupWord> gens_;
  int radius_ = 0;
  std::vector<std::pair<RationalMatrix, RationalMatrix>> gen_m_;
  std::vector<std::pair<ModMatrix, ModMatrix>> gen_img_;
  std::vector<Element> elems_;
  mutable std::vector<RationalMatrix> exact_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

// Two-valued-with-doubt membership: a found witness is definitive, absence is
// only absence within the searched radius.
struct MembershipAnswer {
  bool found = false;
  GroupWord witness;  // over the generating list, meaningful when found
  int radius = 0;

  static MembershipAnswer hit(GroupWord w, int r) { return {true, std::move(w), r}; }
  static MembershipAnswer miss(int r) { return {false, {}, r}; }
};

inline MembershipAnswer member(const RationalMatrix& g, const Ball& ball) {
  auto idx = ball.find(g);
  if (idx) return MembershipAnswer::hit(ball[*idx].gword, ball.radius());
  return MembershipAnswer::miss(ball.radius());
}

inline MembershipAnswer member(const RationalMatrix& g, const GeneratorTable& table,
                               const std::vector<GroupWord>& gens, int radius) {
  Ball b(table, gens, radius);
  return member(g, b);
}

inline std::vector<GroupWord> single_letter_words(const GeneratorTable& table) {
  std::vector<GroupWord> gens;
  for (std::size_t i = 0; i < table.size(); ++i) gens.push_back(GroupWord::letter(i));
  return gens;
}

}  // namespace s2t
