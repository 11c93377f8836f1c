#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "s2t/embed.hpp"
#include "s2t/errors.hpp"
#include "s2t/matrix.hpp"
#include "s2t/proximal.hpp"
#include "s2t/rational.hpp"
#include "s2t/tower.hpp"
#include "s2t/verify.hpp"
#include "s2t/words.hpp"

namespace s2t {

// Insertion-ordered JSON so identical inputs serialize byte-identically.
using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (!j.is_string()) throw InputError("json: rational must be a \"p/q\" string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("json: ") + e.what());
  }
}

inline Json matrix_to_json(const RationalMatrix& m) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t k = 0; k < m.n(); ++k) entries.push_back(m.at(i, k).str());
  return Json{{"n", m.n()}, {"entries", std::move(entries)}};
}

inline RationalMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw InputError("json: matrix needs fields n and entries");
  std::size_t n = j.at("n").get<std::size_t>();
  const Json& e = j.at("entries");
  if (!e.is_array() || e.size() != n * n)
    throw InputError("json: matrix entry count does not match n*n");
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) m.at(i, k) = rational_from_json(e[i * n + k]);
  return m;
}

inline Json word_to_json(const GroupWord& w, const GeneratorTable& table) {
  Json out = Json::array();
  for (const auto& y : w.syls)
    out.push_back(Json{{"gen", table[y.gen].name}, {"pow", y.pow}});
  return out;
}

inline GroupWord word_from_json(const Json& j, const GeneratorTable& table) {
  if (!j.is_array()) throw InputError("json: word must be an array of syllables");
  GroupWord w;
  for (const Json& s : j) {
    if (!s.is_object() || !s.contains("gen") || !s.contains("pow"))
      throw InputError("json: word syllable needs fields gen and pow");
    w.append(table.require(s.at("gen").get<std::string>()), s.at("pow").get<long>());
  }
  return w;
}

inline Json scheme_to_json(const PingPongScheme& s) {
  return Json{{"basis", matrix_to_json(s.basis)},
              {"L", s.L.str()},
              {"seed", s.seed}};
}

inline PingPongScheme scheme_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("basis") || !j.contains("L"))
    throw InputError("json: scheme needs fields basis and L");
  PingPongScheme s = make_scheme(matrix_from_json(j.at("basis")),
                                 rational_from_json(j.at("L")),
                                 j.value("seed", std::uint64_t{0}));
  return s;
}

inline Json named_gens_to_json(const std::vector<std::pair<std::string, RationalMatrix>>& gens) {
  Json out = Json::array();
  for (const auto& [name, m] : gens) out.push_back(Json{{"name", name}, {"matrix", matrix_to_json(m)}});
  return out;
}

inline std::vector<std::pair<std::string, RationalMatrix>> named_gens_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("json: generator list must be an array");
  std::vector<std::pair<std::string, RationalMatrix>> out;
  for (const Json& g : j) {
    if (!g.is_object() || !g.contains("name") || !g.contains("matrix"))
      throw InputError("json: generator needs fields name and matrix");
    out.emplace_back(g.at("name").get<std::string>(), matrix_from_json(g.at("matrix")));
  }
  return out;
}

namespace jdetail {

// Words inside a certificate are spelled over the snapshot's own generator
// list, so (de)serialization rebuilds a scratch table from the snapshot.
inline GeneratorTable snapshot_table(
    const std::vector<std::pair<std::string, RationalMatrix>>& gens) {
  GeneratorTable t;
  for (const auto& [name, m] : gens) t.add(name, Factor::Base, m);
  return t;
}

}  // namespace jdetail

inline Json certificate_to_json(const EmbeddingCertificate& c) {
  Json j{{"kind", c.kind},
         {"scheme", scheme_to_json(c.scheme)},
         {"ell", matrix_to_json(c.ell)},
         {"radius", c.radius},
         {"exponentCap", c.exponent_cap},
         {"checkedWords", c.checked_words},
         {"aux", c.aux},
         {"involutionConjugacyRadius", c.involution_conjugacy_radius},
         {"seed", c.seed},
         {"configHash", c.config_hash},
         {"created", c.created},
         {"violations", c.violations},
         {"side0Gens", named_gens_to_json(c.side0_gens)}};
  if (c.kind == "free") {
    j["side1Gens"] = named_gens_to_json(c.side1_gens);
    j["prMat"] = matrix_to_json(c.pr_mat);
  } else {
    j["tMat"] = matrix_to_json(c.t_mat);
    j["vMat"] = matrix_to_json(c.v_mat);
    j["conjWord"] = word_to_json(c.conj_word, jdetail::snapshot_table(c.side0_gens));
  }
  return j;
}

inline EmbeddingCertificate certificate_from_json(const Json& j) {
  EmbeddingCertificate c;
  try {
    c.kind = j.at("kind").get<std::string>();
    c.scheme = scheme_from_json(j.at("scheme"));
    c.ell = matrix_from_json(j.at("ell"));
    c.radius = j.at("radius").get<int>();
    c.exponent_cap = j.at("exponentCap").get<int>();
    c.checked_words = j.at("checkedWords").get<std::uint64_t>();
    c.aux = j.at("aux").get<bool>();
    c.involution_conjugacy_radius = j.value("involutionConjugacyRadius", 0);
    c.seed = j.at("seed").get<std::uint64_t>();
    c.config_hash = j.value("configHash", std::uint64_t{0});
    c.created = j.value("created", std::int64_t{0});
    if (j.contains("violations"))
      c.violations = j.at("violations").get<std::vector<std::string>>();
    c.side0_gens = named_gens_from_json(j.at("side0Gens"));
    if (c.kind == "free") {
      c.side1_gens = named_gens_from_json(j.at("side1Gens"));
      c.pr_mat = matrix_from_json(j.at("prMat"));
    } else if (c.kind == "hnn") {
      c.t_mat = matrix_from_json(j.at("tMat"));
      c.v_mat = matrix_from_json(j.at("vMat"));
      c.conj_word = word_from_json(j.at("conjWord"), jdetail::snapshot_table(c.side0_gens));
    } else {
      throw InputError("json: unknown certificate kind '" + c.kind + "'");
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("json: malformed certificate: ") + e.what());
  }
  return c;
}

inline Json state_to_json(const TowerState& st) {
  Json table = Json::array();
  for (std::size_t i = 0; i < st.table.size(); ++i)
    table.push_back(Json{{"name", st.table[i].name},
                         {"role", factor_name(st.table[i].role)},
                         {"matrix", matrix_to_json(st.table[i].m)}});
  Json agens = Json::array();
  for (const GroupWord& w : st.a_gens) agens.push_back(word_to_json(w, st.table));
  Json ledger = Json::array();
  for (const LedgerEntry& e : st.ledger)
    ledger.push_back(Json{{"v", word_to_json(e.v, st.table)},
                          {"f", word_to_json(e.f, st.table)},
                          {"witness", word_to_json(e.witness, st.table)}});
  Json history = Json::array();
  for (const StepRecord& r : st.history) {
    Json h{{"kind", r.kind},
           {"v", word_to_json(r.v, st.table)},
           {"detail", r.detail}};
    if (r.has_cert) h["certificate"] = certificate_to_json(r.cert);
    history.push_back(std::move(h));
  }
  Json processed = Json::array();
  for (const GroupWord& w : st.processed) processed.push_back(word_to_json(w, st.table));
  return Json{{"n", st.n()},
              {"table", std::move(table)},
              {"hCount", st.h_count},
              {"a0Count", st.a0_count},
              {"tMat", matrix_to_json(st.t_mat)},
              {"aGens", std::move(agens)},
              {"ledger", std::move(ledger)},
              {"history", std::move(history)},
              {"processed", std::move(processed)},
              {"seed", st.seed},
              {"stage", st.stage}};
}

inline TowerState state_from_json(const Json& j) {
  TowerState st;
  try {
    for (const Json& g : j.at("table"))
      st.table.add(g.at("name").get<std::string>(),
                   factor_from_name(g.at("role").get<std::string>()),
                   matrix_from_json(g.at("matrix")));
    if (st.table.n() != j.at("n").get<std::size_t>())
      throw InputError("json: state dimension disagrees with its table");
    st.h_count = j.at("hCount").get<std::size_t>();
    st.a0_count = j.at("a0Count").get<std::size_t>();
    st.t_mat = matrix_from_json(j.at("tMat"));
    for (const Json& w : j.at("aGens")) st.a_gens.push_back(word_from_json(w, st.table));
    for (const Json& e : j.at("ledger"))
      st.ledger.push_back({word_from_json(e.at("v"), st.table),
                           word_from_json(e.at("f"), st.table),
                           word_from_json(e.at("witness"), st.table)});
    for (const Json& h : j.at("history")) {
      StepRecord r;
      r.kind = h.at("kind").get<std::string>();
      r.v = word_from_json(h.at("v"), st.table);
      r.detail = h.at("detail").get<std::string>();
      if (h.contains("certificate")) {
        r.has_cert = true;
        r.cert = certificate_from_json(h.at("certificate"));
      }
      st.history.push_back(std::move(r));
    }
    for (const Json& w : j.at("processed")) st.processed.push_back(word_from_json(w, st.table));
    st.seed = j.at("seed").get<std::uint64_t>();
    st.stage = j.at("stage").get<int>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("json: malformed state: ") + e.what());
  }
  return st;
}

inline Json report_to_json(const VerificationReport& r) {
  Json radii = Json::object();
  for (const auto& [name, v] : r.radii) radii[name] = v;
  return Json{{"check", r.check},
              {"pass", r.pass},
              {"radii", std::move(radii)},
              {"witnesses", r.witnesses},
              {"notes", r.notes}};
}

inline Json condition_report_to_json(const ConditionReport& r) {
  Json items = Json::array();
  for (const auto& it : r.items)
    items.push_back(Json{{"name", it.name}, {"pass", it.pass}, {"witness", it.witness}});
  return Json{{"all", r.all()}, {"items", std::move(items)}};
}

}  // namespace s2t
