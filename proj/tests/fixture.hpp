#pragma once

// Shared dimension-6 fixture used across the test files: one unipotent
// generator, the signature-(4,2) diagonal involution, and a lazily built
// three-stage tower over them. Built once per test process.

#include "s2t/involution.hpp"
#include "s2t/matrix.hpp"
#include "s2t/tower.hpp"

namespace fixture {

inline s2t::RationalMatrix unipotent6() {
  s2t::RationalMatrix u = s2t::RationalMatrix::identity(6);
  u.at(0, 1) = s2t::Rational(1);
  return u;
}

inline s2t::RationalMatrix t6() { return s2t::block_involution(6, 4); }

inline constexpr std::uint64_t kSeed = 2026;

inline const s2t::TowerState& stage3() {
  static const s2t::TowerState st = [] {
    s2t::TowerState s = s2t::bootstrap({{"u", unipotent6()}}, {}, 4, 4, kSeed);
    s2t::TowerBudget budget;
    budget.stages = 3;
    budget.enum_radius = 2;
    budget.cert_radius = 4;
    s2t::run_tower(s, budget);
    return s;
  }();
  return st;
}

// 3x3 elementary matrices; a pair of commuting translations for the
// negative-control fixtures.
inline s2t::RationalMatrix e12_3() {
  s2t::RationalMatrix m = s2t::RationalMatrix::identity(3);
  m.at(0, 1) = s2t::Rational(1);
  return m;
}

inline s2t::RationalMatrix e13_3() {
  s2t::RationalMatrix m = s2t::RationalMatrix::identity(3);
  m.at(0, 2) = s2t::Rational(1);
  return m;
}

// The classical free pair in SL_2(Z).
inline s2t::RationalMatrix sanov_a() {
  s2t::RationalMatrix m = s2t::RationalMatrix::identity(2);
  m.at(0, 1) = s2t::Rational(2);
  return m;
}

inline s2t::RationalMatrix sanov_b() {
  s2t::RationalMatrix m = s2t::RationalMatrix::identity(2);
  m.at(1, 0) = s2t::Rational(2);
  return m;
}

}  // namespace fixture
