// Acceptance driver: exercises the library and the command-line tool against
// the contract the project promises. Each criterion prints one PASS/FAIL
// line; any failure lists its reasons and flips the exit code.

#include <sys/wait.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "s2t/ball.hpp"
#include "s2t/embed.hpp"
#include "s2t/involution.hpp"
#include "s2t/json_io.hpp"
#include "s2t/linalg.hpp"
#include "s2t/projective.hpp"
#include "s2t/proximal.hpp"
#include "s2t/rng.hpp"
#include "s2t/tower.hpp"
#include "s2t/verify.hpp"
#include "s2t/words.hpp"

namespace fs = std::filesystem;
using namespace s2t;

namespace {

std::string g_exe;
fs::path g_scratch;
int g_failures = 0;

struct Checker {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  }
};

void report(int num, const std::string& what, const std::vector<std::string>& problems) {
  if (problems.empty()) {
    std::printf("PASS criterion %d: %s\n", num, what.c_str());
  } else {
    std::printf("FAIL criterion %d: %s\n", num, what.c_str());
    for (const std::string& p : problems) std::printf("       - %s\n", p.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

int run_cli(const std::string& args, const fs::path& log) {
  std::string cmd = "\"" + g_exe + "\" " + args + " >\"" + log.string() + "\" 2>&1";
  int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << s;
}

RationalMatrix unipotent6() {
  RationalMatrix m = RationalMatrix::identity(6);
  m.at(0, 1) = Rational(1);
  return m;
}

Json base_config() {
  Json budgets{{"stages", 3},      {"enumRadius", 2}, {"certRadius", 4},
               {"exponentCap", 3}, {"LmaxExp", 10},   {"retryCap", 8},
               {"conjRadius", 4},  {"classifyRadius", 4}, {"heightBound", 10}};
  return Json{{"n", 6},
              {"r", 4},
              {"hGens", Json::array({Json{{"name", "u"}, {"matrix", matrix_to_json(unipotent6())}}})},
              {"aWords", Json::array()},
              {"budgets", budgets},
              {"seed", 2026},
              {"out", "out"}};
}

Rational small_rational(Rng& rng, long span, long dmax) {
  return Rational(rng.uniform(-span, span), rng.uniform(1, dmax));
}

// exact random invertible: unit lower triangular times unit upper triangular
RationalMatrix random_invertible(Rng& rng, std::size_t n) {
  RationalMatrix lo = RationalMatrix::identity(n);
  RationalMatrix up = RationalMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (i < k) up.at(i, k) = small_rational(rng, 2, 2);
      if (i > k) lo.at(i, k) = small_rational(rng, 2, 2);
    }
  return lo * up;
}

Vec random_point(Rng& rng, std::size_t n) {
  Vec v(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) v[i] = small_rational(rng, 3, 3);
  v[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1))] = Rational(1);  // never zero
  return v;
}

// --------------------------------------------------------------------------
// criterion 1: exact algebra with no tolerances anywhere

void criterion1() {
  Checker c;
  Rng rng(11);

  RationalMatrix t0 = block_involution(6, 4);
  for (int rep = 0; rep < 30; ++rep) {
    RationalMatrix g = random_invertible(rng, 6);
    RationalMatrix t = g * t0 * inverse(g).value();
    Projector p = Projector::from_involution(Involution::make(t));
    c.expect(p.matrix * p.matrix == p.matrix, "projector not idempotent");
    c.expect(p.image.size() == 4 && p.kernel.size() == 2, "projector rank drifted");
  }

  for (int rep = 0; rep < 200; ++rep) {
    ProjectivePoint a(random_point(rng, 4));
    ProjectivePoint b(random_point(rng, 4));
    ProjectivePoint cc(random_point(rng, 4));
    Rational ab = proj_distance_sq(a, b);
    Rational bc = proj_distance_sq(b, cc);
    Rational ac = proj_distance_sq(a, cc);
    c.expect(ab == proj_distance_sq(b, a), "metric not symmetric");
    c.expect(ab.sign() >= 0 && ab <= Rational(1), "metric out of range");
    c.expect(proj_distance_sq(a, a).is_zero(), "self distance nonzero");
    c.expect(ab.is_zero() == (a.rep() == b.rep()), "vanishing does not match equality");
    c.expect(ac <= Rational(2) * (ab + bc), "quasi-triangle inequality failed");
  }

  for (int rep = 0; rep < 200; ++rep) {
    Vec v = random_point(rng, 5);
    Vec w = v;
    Rational lam(-3, 7);
    for (Rational& x : w) x = x * lam;
    c.expect(ProjectivePoint(v).rep() == ProjectivePoint(w).rep(),
             "projective representative not scale invariant");
    Rational q = small_rational(rng, 4000, 997);
    c.expect(Rational::parse(q.str()) == q, "rational text round trip failed");
  }

  report(1, "exact algebra: projectors, metric axioms, canonical round trips", c.problems);
}

// --------------------------------------------------------------------------
// criterion 2: scalar detection from eigenvector families vs brute force

std::optional<Rational> brute_scalar(const RationalMatrix& b) {
  Rational lam = b.at(0, 0);
  for (std::size_t i = 0; i < b.n(); ++i)
    for (std::size_t k = 0; k < b.n(); ++k)
      if (b.at(i, k) != (i == k ? lam : Rational(0))) return std::nullopt;
  return lam;
}

void criterion2() {
  Checker c;
  Rng rng(22);
  std::uint64_t agreements = 0;

  for (std::size_t n : {std::size_t{4}, std::size_t{6}}) {
    std::vector<Vec> family;
    for (std::size_t i = 0; i < n; ++i) {
      Vec e(n, Rational(0));
      e[i] = Rational(1);
      family.push_back(e);
    }
    family.push_back(Vec(n, Rational(1)));

    for (int rep = 0; rep < 600; ++rep) {
      RationalMatrix b(n);
      switch (rng.uniform(0, 2)) {
        case 0: {  // scalar, zero included
          Rational lam = small_rational(rng, 3, 2);
          for (std::size_t i = 0; i < n; ++i) b.at(i, i) = lam;
          break;
        }
        case 1: {  // diagonal with two forced distinct entries
          for (std::size_t i = 0; i < n; ++i) b.at(i, i) = small_rational(rng, 3, 2);
          b.at(0, 0) = Rational(2);
          b.at(1, 1) = Rational(5);
          break;
        }
        default:
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) b.at(i, k) = small_rational(rng, 2, 2);
      }
      std::optional<Rational> got = scalar_from_eigenvectors(b, family);
      std::optional<Rational> want = brute_scalar(b);
      if (got == want) ++agreements;
      c.expect(got == want, "scalar detection disagreed with entry scan");
    }
  }
  c.expect(agreements == 1200, "expected 1200 agreements, saw " + std::to_string(agreements));

  report(2, "scalar detection agrees with brute force on 1200 random matrices", c.problems);
}

// --------------------------------------------------------------------------
// criterion 3: word layer against independent combinatorics

void criterion3() {
  Checker c;
  Rng rng(33);

  GeneratorTable sanov;
  {
    RationalMatrix a = RationalMatrix::identity(2), b = RationalMatrix::identity(2);
    a.at(0, 1) = Rational(2);
    b.at(1, 0) = Rational(2);
    sanov.add("a", Factor::Base, a);
    sanov.add("b", Factor::Base, b);
  }

  for (int rep = 0; rep < 1000; ++rep) {
    GroupWord raw;
    std::size_t len = static_cast<std::size_t>(rng.uniform(1, 12));
    for (std::size_t i = 0; i < len; ++i)
      raw.syls.push_back({static_cast<std::size_t>(rng.uniform(0, 1)), rng.uniform(-2, 2)});
    GroupWord red = raw.reduced();
    c.expect(evaluate(raw, sanov) == evaluate(red, sanov), "reduction changed the value");
    for (std::size_t i = 0; i + 1 < red.syls.size(); ++i)
      c.expect(red.syls[i].gen != red.syls[i + 1].gen, "adjacent syllables share a letter");
    for (const auto& y : red.syls) c.expect(y.pow != 0, "zero power survived reduction");
    c.expect(evaluate(raw.concat(raw.inverse()).reduced(), sanov).is_identity(),
             "w * w^-1 did not reduce to the identity");
  }

  {
    RationalMatrix t = block_involution(6, 4);
    RationalMatrix k = RationalMatrix::identity(6);
    k.at(0, 1) = Rational(2);
    k.at(4, 5) = Rational(-1);
    c.expect(k * t == t * k, "stable-letter fixture must commute with the pivot");
    std::vector<RawHnnLetter> pinch{RawHnnLetter(-1), RawHnnLetter(t), RawHnnLetter(1)};
    HnnWord w = britton_reduce(pinch, t);
    c.expect(w.is_pure_base() && w.toks[0].g == t, "k^-1 t k did not pinch to t");
    HnnWord empty = britton_reduce({RawHnnLetter(-1), RawHnnLetter(1)}, t);
    c.expect(empty.is_empty(), "k^-1 k did not cancel");
  }

  // ball sizes against closed forms: free rank 2, infinite cyclic, order 2
  auto ball_size = [](const GeneratorTable& t, int radius) {
    return Ball(t, single_letter_words(t), radius).size();
  };
  std::size_t expect_free = 1, shell = 4;
  for (int radius = 1; radius <= 3; ++radius) {
    expect_free += shell;
    c.expect(ball_size(sanov, radius) == expect_free,
             "free ball size off at radius " + std::to_string(radius));
    shell *= 3;
  }
  GeneratorTable cyc;
  cyc.add("u", Factor::Base, unipotent6());
  for (int radius = 1; radius <= 3; ++radius)
    c.expect(ball_size(cyc, radius) == static_cast<std::size_t>(2 * radius + 1),
             "cyclic ball size off at radius " + std::to_string(radius));
  GeneratorTable invo;
  invo.add("t", Factor::Base, block_involution(6, 4));
  c.expect(ball_size(invo, 3) == 2, "order-2 ball should saturate at 2");

  report(3, "word reductions preserve values; pinches cancel; ball counts match closed forms",
         c.problems);
}

// --------------------------------------------------------------------------
// criterion 4: command-line bootstrap with a bounded, replayable certificate

void criterion4() {
  Checker c;
  fs::path dir = g_scratch / "c4";
  spit(dir / "config.json", base_config().dump(2) + "\n");

  int rc = run_cli("bootstrap --config \"" + (dir / "config.json").string() + "\" --out \"" +
                       dir.string() + "\"",
                   dir / "bootstrap.log");
  c.expect(rc == 0, "bootstrap exited " + std::to_string(rc));

  fs::path state_path = dir / "tower.json";
  c.expect(fs::exists(state_path), "state file missing");
  if (fs::exists(state_path)) {
    TowerState st = state_from_json(Json::parse(slurp(state_path)));
    c.expect(st.stage == 0, "growth stages count from 0 after bootstrap");
    c.expect(!st.history.empty() && st.history[0].has_cert, "bootstrap certificate missing");
    if (!st.history.empty() && st.history[0].has_cert) {
      const EmbeddingCertificate& cert = st.history[0].cert;
      c.expect(cert.kind == "free", "bootstrap certificate has the wrong kind");
      c.expect(cert.scheme.L <= Rational(1024), "scaling exceeded 2^10: " + cert.scheme.L.str());
      c.expect(cert.radius == 4, "scan radius must be 4");
      c.expect(cert.exponent_cap == 3, "exponent cap must be 3");
      c.expect(cert.involution_conjugacy_radius == 4, "conjugacy radius must be 4");
      ReplayResult rr = replay_certificate(cert);
      c.expect(rr.ok, "in-process replay failed: " + rr.detail);
      c.expect(rr.checked == cert.checked_words, "replay word count drifted");
    }
  }

  fs::path cert_file = dir / "certs" / "cert-000-bootstrap.json";
  c.expect(fs::exists(cert_file), "certificate file missing");
  rc = run_cli("cert replay \"" + cert_file.string() + "\"", dir / "replay.log");
  c.expect(rc == 0, "cert replay exited " + std::to_string(rc));

  report(4, "bootstrap succeeds with scaling at most 2^10 and a replayable certificate",
         c.problems);
}

// --------------------------------------------------------------------------
// criterion 5: stable letter for a random ball conjugate of the pivot

void criterion5() {
  Checker c;
  RationalMatrix t0 = block_involution(6, 4);
  Involution t = Involution::make(t0);

  FreeEmbedding fe = embed_free_product({{"t", t0}}, {{"u", unipotent6()}},
                                        Projector::from_involution(t), 4, 3, 2026);
  RationalMatrix h1 = fe.f * unipotent6() * inverse(fe.f).value();
  std::vector<std::pair<std::string, RationalMatrix>> gens{{"t", t0}, {"h1", h1}};

  GeneratorTable table;
  for (const auto& [name, m] : gens) table.add(name, Factor::Base, m);
  Ball ball(table, single_letter_words(table), 3);

  Rng rng(2026);
  RationalMatrix v(6);
  for (;;) {
    std::size_t i = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(ball.size()) - 1));
    v = ball.exact_inverse(i) * t0 * ball.exact(i);
    if (!(v == t0)) break;  // skip centralizer picks
  }

  HnnEmbedding he = embed_hnn(gens, t, v, 4, 3, 2027);
  c.expect(inverse(he.ell).value() * t0 * he.ell == v,
           "stable letter does not conjugate the pivot to the target");
  c.expect(he.cert.kind == "hnn", "certificate kind drifted");
  c.expect(he.cert.radius == 4, "pinch-free scan must run at radius 4");
  c.expect(he.cert.violations.empty() && he.cert.aux, "certificate records violations");
  ReplayResult rr = replay_certificate(he.cert);
  c.expect(rr.ok, "replay failed: " + rr.detail);
  c.expect(rr.checked > 0 && rr.checked == he.cert.checked_words, "replay word count drifted");

  report(5, "stable letter conjugates the pivot to a random ball conjugate exactly", c.problems);
}

// --------------------------------------------------------------------------
// criterion 6: three command-line stages, ledger and group checks all pass

void criterion6() {
  Checker c;
  fs::path dir = g_scratch / "c6";
  spit(dir / "config.json", base_config().dump(2) + "\n");
  std::string cfg = " --config \"" + (dir / "config.json").string() + "\"";
  std::string out = " --out \"" + dir.string() + "\"";

  c.expect(run_cli("bootstrap" + cfg + out, dir / "bootstrap.log") == 0, "bootstrap failed");
  c.expect(run_cli("tower" + cfg + out + " --stages 3", dir / "tower.log") == 0, "tower failed");
  int vrc = run_cli("verify --state \"" + (dir / "tower.json").string() + "\"" + out,
                    dir / "verify.log");
  c.expect(vrc == 0, "verify exited " + std::to_string(vrc));

  Json rep = Json::parse(slurp(dir / "report.json"));
  c.expect(rep.value("allPass", false), "verification report is not clean");

  TowerState st = state_from_json(Json::parse(slurp(dir / "tower.json")));
  c.expect(st.stage == 3, "stage counter is " + std::to_string(st.stage));
  c.expect(!st.ledger.empty(), "ledger is empty after three stages");

  Ball aball(st.table, st.a_gens, 4);
  for (const LedgerEntry& e : st.ledger) {
    RationalMatrix lhs = st.t_mat * evaluate(e.f, st.table) *
                         inverse(evaluate(e.v, st.table)).value();
    c.expect(member(lhs, aball).found,
             "t*f*v^-1 left the stabilizer ball for v=" + to_string(e.v, st.table));
    c.expect(evaluate(e.witness, st.table) == lhs,
             "stored witness does not reproduce t*f*v^-1 for v=" + to_string(e.v, st.table));
  }

  c.expect(check_malnormal(st.table, st.a_gens, 4, 4).pass, "malnormality check failed");
  c.expect(check_no_involutions(st.table, st.a_gens, 4).pass, "stabilizer has an involution");
  ActionBall ab = build_action_ball(st.table, st.a_gens, 3, 6);
  c.expect(check_pchar2(st.table, st.a_gens, ab).pass, "an involution fixed a coset");
  c.expect(check_embedded_action(st.table, 1, st.h_count, st.a0_count, st.a_gens, 3, 6).pass,
           "embedded-pair check failed");

  report(6, "three stages verify: exact ledger plus malnormal, involution-free, "
            "fixed-point-free and embedded-action checks", c.problems);
}

// --------------------------------------------------------------------------
// criterion 7: probe distances fall strictly and hit the closed form

void criterion7() {
  Checker c;
  Rng rng(77);

  PingPongScheme s6 = make_scheme(RationalMatrix::identity(6), Rational(2), 0);
  for (int rep = 0; rep < 20; ++rep) {
    Vec x(6, Rational(0));
    for (std::size_t i = 0; i < 6; ++i) x[i] = small_rational(rng, 3, 3);
    x[0] = Rational(rng.uniform(1, 3));  // off the repelling hyperplane
    x[3] = Rational(1);                                    // and off the attracting line

    Rational a = x[0], b = x[1], tail(0);
    for (std::size_t i = 2; i < 6; ++i) tail = tail + x[i] * x[i];

    std::optional<Rational> prev;
    for (int e = 1; e <= 4; ++e) {
      PingPongScheme s = s6;
      s.L = Rational(mpz_class(mpz_class(1) << e));
      RationalMatrix f = build_scaled(s);
      Rational d = proj_distance_sq(ProjectivePoint(f.apply(x)), s.a_plus());
      Rational l2 = s.L * s.L;
      Rational expected = (b * b / l2 + tail) / (a * a * l2 + b * b / l2 + tail);
      c.expect(d == expected, "probe distance missed the closed form");
      if (prev) c.expect(d < *prev, "probe distance did not fall strictly");
      prev = d;
    }
  }

  PingPongScheme s2 = make_scheme(RationalMatrix::identity(2), Rational(2), 0);
  Vec x2{Rational(1), Rational(1)};
  long l4[] = {16, 256, 4096, 65536};
  for (int e = 1; e <= 4; ++e) {
    PingPongScheme s = s2;
    s.L = Rational(mpz_class(mpz_class(1) << e));
    RationalMatrix f = build_scaled(s);
    Rational d = proj_distance_sq(ProjectivePoint(f.apply(x2)), s.a_plus());
    c.expect(d == Rational(1, l4[e - 1] + 1),
             "two-dimensional distance at L=2^" + std::to_string(e) + " is " + d.str());
  }

  report(7, "probe distances fall strictly and match 1/(L^4+1) in dimension two", c.problems);
}

// --------------------------------------------------------------------------
// criterion 8: negative controls exit with the right codes and witnesses

void criterion8() {
  Checker c;
  fs::path dir = g_scratch / "c8";

  {  // a starting group containing an involution is refused up front
    Json cfg = base_config();
    RationalMatrix w = RationalMatrix::identity(6);
    w.at(2, 2) = w.at(3, 3) = w.at(4, 4) = w.at(5, 5) = Rational(-1);
    cfg["hGens"].push_back(Json{{"name", "w"}, {"matrix", matrix_to_json(w)}});
    spit(dir / "involution.json", cfg.dump(2) + "\n");
    int rc = run_cli("bootstrap --config \"" + (dir / "involution.json").string() +
                         "\" --out \"" + (dir / "a").string() + "\"",
                     dir / "a.log");
    c.expect(rc == 2, "involution config: expected exit 2, got " + std::to_string(rc));
    std::string log = slurp(dir / "a.log");
    c.expect(log.find("involution") != std::string::npos && log.find("w") != std::string::npos,
             "involution rejection does not name the witness");
  }

  // a clean run to doctor
  spit(dir / "config.json", base_config().dump(2) + "\n");
  std::string cfg = " --config \"" + (dir / "config.json").string() + "\"";
  std::string out = " --out \"" + (dir / "good").string() + "\"";
  c.expect(run_cli("bootstrap" + cfg + out, dir / "good-b.log") == 0, "clean bootstrap failed");
  c.expect(run_cli("tower" + cfg + out + " --stages 3", dir / "good-t.log") == 0,
           "clean tower failed");
  Json good = Json::parse(slurp(dir / "good" / "tower.json"));

  {  // stabilizer generators must never include the pivot involution
    Json doctored = good;
    doctored["aGens"].push_back(Json::array({Json{{"gen", "t"}, {"pow", 1}}}));
    spit(dir / "pivot-in-A.json", doctored.dump(2) + "\n");
    int rc = run_cli("verify --state \"" + (dir / "pivot-in-A.json").string() + "\" --out \"" +
                         (dir / "b").string() + "\"",
                     dir / "b.log");
    c.expect(rc == 1, "pivot-in-A: expected exit 1, got " + std::to_string(rc));
    Json rep = Json::parse(slurp(dir / "b" / "report.json"));
    bool named = false;
    for (const Json& chk : rep["checks"])
      if (!chk["pass"].get<bool>())
        for (const Json& w : chk["witnesses"])
          if (w.get<std::string>() == "t") named = true;
    c.expect(named, "pivot-in-A: no failing check names the witness t");
  }

  {  // tampering with a ledger witness is caught by re-evaluation
    Json doctored = good;
    doctored["ledger"][1]["witness"] = doctored["ledger"][0]["witness"];
    spit(dir / "tampered-ledger.json", doctored.dump(2) + "\n");
    int rc = run_cli("verify --state \"" + (dir / "tampered-ledger.json").string() +
                         "\" --out \"" + (dir / "c").string() + "\"",
                     dir / "c.log");
    c.expect(rc == 1, "tampered ledger: expected exit 1, got " + std::to_string(rc));
    std::string log = slurp(dir / "c.log");
    c.expect(log.find("does not evaluate") != std::string::npos,
             "tampered ledger: failure does not say what broke");
  }

  {  // odd n-r pushes the pivot out of the special linear group
    Json cfg2 = base_config();
    cfg2["r"] = 3;
    spit(dir / "odd.json", cfg2.dump(2) + "\n");
    int rc = run_cli("bootstrap --config \"" + (dir / "odd.json").string() + "\" --out \"" +
                         (dir / "d").string() + "\"",
                     dir / "d.log");
    c.expect(rc == 2, "odd split: expected exit 2, got " + std::to_string(rc));
    c.expect(slurp(dir / "d.log").find("determinant") != std::string::npos,
             "odd split rejection does not cite the determinant constraint");
  }

  report(8, "negative controls exit 2/1/1/2 and name their witnesses", c.problems);
}

// --------------------------------------------------------------------------
// criterion 9: byte-identical reruns

void criterion9() {
  Checker c;
  fs::path dir = g_scratch / "c9";
  spit(dir / "config.json", base_config().dump(2) + "\n");
  std::string cfg = " --config \"" + (dir / "config.json").string() + "\"";

  for (const char* leg : {"one", "two"}) {
    std::string out = " --out \"" + (dir / leg).string() + "\"";
    c.expect(run_cli("bootstrap" + cfg + out, dir / (std::string(leg) + "-b.log")) == 0,
             std::string(leg) + ": bootstrap failed");
    c.expect(run_cli("tower" + cfg + out + " --stages 3", dir / (std::string(leg) + "-t.log")) == 0,
             std::string(leg) + ": tower failed");
    c.expect(run_cli("verify --state \"" + (dir / leg / "tower.json").string() + "\"" + out,
                     dir / (std::string(leg) + "-v.log")) == 0,
             std::string(leg) + ": verify failed");
  }

  auto compare = [&](const fs::path& rel) {
    std::string a = slurp(dir / "one" / rel);
    std::string b = slurp(dir / "two" / rel);
    c.expect(!a.empty() && a == b, rel.string() + " differs between runs");
  };
  compare("tower.json");
  compare("report.json");

  std::vector<std::string> certs_one, certs_two;
  for (const auto& e : fs::directory_iterator(dir / "one" / "certs"))
    certs_one.push_back(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(dir / "two" / "certs"))
    certs_two.push_back(e.path().filename().string());
  std::sort(certs_one.begin(), certs_one.end());
  std::sort(certs_two.begin(), certs_two.end());
  c.expect(certs_one == certs_two && !certs_one.empty(), "certificate file lists differ");
  for (const std::string& name : certs_one) compare(fs::path("certs") / name);

  report(9, "two runs from one configuration produce byte-identical outputs", c.problems);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-s2tower>\n");
    return 2;
  }
  g_exe = argv[1];
  g_scratch = fs::current_path() / "acceptance_scratch";
  fs::remove_all(g_scratch);
  fs::create_directories(g_scratch);

  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();

  std::printf("acceptance: %d of 9 criteria passed\n", 9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
