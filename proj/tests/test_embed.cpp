#include <catch2/catch_amalgamated.hpp>

#include "fixture.hpp"
#include "s2t/embed.hpp"

using namespace s2t;

namespace {

FreeEmbedding free_fixture() {
  static const FreeEmbedding e = [] {
    Projector pr = Projector::from_involution(Involution::make(fixture::t6()));
    return embed_free_product({{"t", fixture::t6()}}, {{"u", fixture::unipotent6()}}, pr, 4, 3,
                              fixture::kSeed);
  }();
  return e;
}

// The embedded pair: the pivot together with the conjugated base generator.
RationalMatrix embedded_h1() {
  const FreeEmbedding& e = free_fixture();
  return e.f * e.cert.side1_gens[0].second * *inverse(e.f);
}

GeneratorTable joint_table() {
  GeneratorTable t;
  t.add("t", Factor::Base, fixture::t6());
  t.add("h1", Factor::Base, embedded_h1());
  return t;
}

}  // namespace

TEST_CASE("free-product embedding certifies the dimension-6 fixture") {
  const FreeEmbedding& e = free_fixture();
  CHECK(e.cert.kind == "free");
  CHECK(e.cert.aux);
  CHECK(e.cert.violations.empty());
  CHECK(e.cert.radius == 4);
  CHECK(e.cert.exponent_cap == 3);
  // the first rung of the scaling ladder already suffices here
  CHECK(e.cert.scheme.L == Rational(2));
  // frozen enumeration count for this alphabet: one order-two letter against
  // exponent-capped powers of one unipotent, scanned to radius 4
  CHECK(e.cert.checked_words == 132);
  CHECK(e.f == build_scaled(e.cert.scheme));
  CHECK(det(e.f) == Rational(1));
}

TEST_CASE("certificate replay re-derives the verdict and the word count") {
  ReplayResult r = replay_certificate(free_fixture().cert);
  CHECK(r.ok);
  CHECK(r.checked == 132);
}

TEST_CASE("tampered certificates are rejected for the stated reason") {
  EmbeddingCertificate c = free_fixture().cert;
  c.checked_words += 1;
  ReplayResult r1 = replay_certificate(c);
  CHECK_FALSE(r1.ok);
  CHECK(r1.detail.find("word count mismatch") != std::string::npos);

  c = free_fixture().cert;
  c.scheme = make_scheme(c.scheme.basis, c.scheme.L * Rational(2), c.scheme.seed);
  ReplayResult r2 = replay_certificate(c);
  CHECK_FALSE(r2.ok);
  CHECK(r2.detail.find("disagrees with the stored scheme") != std::string::npos);

  c = free_fixture().cert;
  c.violations.push_back("synthetic");
  c.aux = false;
  CHECK_FALSE(replay_certificate(c).ok);
}

TEST_CASE("embedding rejects degenerate inputs by name") {
  Projector pr = Projector::from_involution(Involution::make(fixture::t6()));
  CHECK_THROWS_AS(embed_free_product({}, {}, pr, 4, 3, 1), InputError);
  // projector too narrow: signature (2,4) fails the width requirement
  RationalMatrix t24 = block_involution(6, 2);
  Projector narrow = Projector::from_involution(Involution::make(t24));
  CHECK_THROWS_AS(
      embed_free_product({}, {{"u", fixture::unipotent6()}}, narrow, 4, 3, 1), InputError);
}

TEST_CASE("ball conditions hold on the embedded pair") {
  GeneratorTable table = joint_table();
  Involution t = Involution::make(fixture::t6());
  ConditionReport aux = verify_aux_condition(table, t, 3);
  CHECK(aux.all());
  ConditionReport inv = check_involutions_conjugate_ball(table, t, 4, 4);
  CHECK(inv.all());
}

TEST_CASE("ball conditions fail with named witnesses on a poisoned table") {
  // m projects to a scalar on the fixed space: the auxiliary condition must
  // single it out
  RationalMatrix m(6);
  m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = m.at(3, 3) = Rational(3);
  m.at(4, 4) = m.at(5, 5) = Rational(1, 9);
  GeneratorTable table;
  table.add("t", Factor::Base, fixture::t6());
  table.add("m", Factor::Base, m);
  Involution t = Involution::make(fixture::t6());
  ConditionReport aux = verify_aux_condition(table, t, 1);
  CHECK_FALSE(aux.all());
  const auto* f = aux.first_failure();
  REQUIRE(f);
  CHECK(f->witness.find("m") != std::string::npos);
}

TEST_CASE("exact fallback covers matrices the residue screen cannot distinguish") {
  // g = 1 + p*E23 is the identity mod the screening prime but nonscalar in Q:
  // the screen cannot prove anything about it, so the exact path must decide
  RationalMatrix g = RationalMatrix::identity(6);
  g.at(2, 3) = Rational(mpz_class(kScreenPrime), mpz_class(1));
  Involution t = Involution::make(fixture::t6());
  detail::AuxScreen screen = detail::AuxScreen::make(t.projector(), t.w_plus());
  CHECK_FALSE(screen.proves_nonscalar(ModMatrix::reduce(g)));

  GeneratorTable table;
  table.add("t", Factor::Base, fixture::t6());
  table.add("g", Factor::Base, g);
  CHECK(verify_aux_condition(table, t, 1).all());

  // g collides with the identity in every residue bucket; exact confirmation
  // must still tell them apart inside the ball
  Ball ball(table, single_letter_words(table), 1);
  CHECK(ball.find(g).has_value());
  CHECK(ball.find(g) != ball.find(RationalMatrix::identity(6)));
}

namespace {

HnnEmbedding hnn_fixture() {
  static const HnnEmbedding e = [] {
    RationalMatrix t = fixture::t6();
    RationalMatrix h1 = embedded_h1();
    RationalMatrix c = h1 * t * h1;
    RationalMatrix v = *inverse(c) * t * c;
    return embed_hnn({{"t", t}, {"h1", h1}}, Involution::make(t), v, 4, 3, fixture::kSeed);
  }();
  return e;
}

}  // namespace

TEST_CASE("stable-letter embedding conjugates the pivot to the target exactly") {
  const HnnEmbedding& e = hnn_fixture();
  CHECK(e.cert.kind == "hnn");
  CHECK(e.cert.aux);
  CHECK(e.cert.violations.empty());
  CHECK(*inverse(e.ell) * fixture::t6() * e.ell == e.cert.v_mat);
  CHECK(det(e.ell) == Rational(1));
  // frozen count: base-word prescan plus the stable-letter ball at radius 4
  CHECK(e.cert.checked_words == 5734);
  // the recorded conjugator is the short word that produced the target
  CHECK(e.cert.conj_word.letter_length() == 3);
}

TEST_CASE("stable-letter replay is exact and tamper-evident") {
  ReplayResult r = replay_certificate(hnn_fixture().cert);
  CHECK(r.ok);
  CHECK(r.checked == 5734);
  EmbeddingCertificate c = hnn_fixture().cert;
  c.v_mat = fixture::t6();
  CHECK_FALSE(replay_certificate(c).ok);
}

TEST_CASE("stable-letter embedding validates its target") {
  RationalMatrix t = fixture::t6();
  Involution ti = Involution::make(t);
  std::vector<std::pair<std::string, RationalMatrix>> gens{
      {"t", t}, {"u", fixture::unipotent6()}};
  // target equal to the pivot
  CHECK_THROWS_AS(embed_hnn(gens, ti, t, 4, 3, 1), InputError);
  // target that is not an involution
  CHECK_THROWS_AS(embed_hnn(gens, ti, fixture::unipotent6(), 4, 3, 1), InputError);
  // involution of a different signature is never a conjugate: the bounded
  // conjugator search must exhaust and say so
  RationalMatrix v24 = block_involution(6, 2);
  try {
    embed_hnn(gens, ti, v24, 3, 2, 1);
    FAIL("expected a missing-conjugator rejection");
  } catch (const InputError& ex) {
    CHECK(std::string(ex.what()).find("missing-conjugator") != std::string::npos);
  }
}

TEST_CASE("unknown certificate kinds are rejected on replay") {
  EmbeddingCertificate c = free_fixture().cert;
  c.kind = "mystery";
  ReplayResult r = replay_certificate(c);
  CHECK_FALSE(r.ok);
}
