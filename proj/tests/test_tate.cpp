/* Copyright 2026 The kodaira Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "kodaira/tate.hpp"

namespace kodaira {
namespace {

using K = KodairaType;

Decided decide(const WeierstrassCurve& E) {
  auto out = run_tate(E);
  if (!is_decided(out)) {
    ADD_FAILURE() << "undecided on " << E.str() << ": " << to_string(out);
    return {};
  }
  return std::get<Decided>(out);
}

Decided decide(const Field& F, std::string_view text) { return decide(parse_curve(F, text)); }

struct Expect {
  const char* curve;
  const char* type;
  int tamagawa;
  int v_min_delta;
  int iterations;
};

TEST(Tate, HandWorkedExamplesOverF5) {
  auto F = FiniteField::standard(5);
  const Expect cases[] = {
      {"[0,0,0,1,1]", "I0", 1, 0, 0},          {"[0,1,0,0,p]", "I1", 1, 1, 0},
      {"[0,1,0,0,p^2]", "I2", 2, 2, 0},        {"[0,2,0,0,p^2]", "I2", 2, 2, 0},
      {"[0,2,0,0,p^3]", "I3", 1, 3, 0},        {"[0,0,0,0,p]", "II", 1, 2, 0},
      {"[0,0,0,p,0]", "III", 2, 3, 0},         {"[0,0,0,0,p^2]", "IV", 3, 4, 0},
      {"[0,0,0,0,2*p^2]", "IV", 1, 4, 0},      {"[0,0,0,0,p^3]", "I0*", 2, 6, 0},
      {"[0,0,0,0,p^4]", "IV*", 3, 8, 0},       {"[0,0,0,p^3,0]", "III*", 2, 9, 0},
      {"[0,0,0,0,p^5]", "II*", 1, 10, 0},      {"[0,0,0,0,p^6]", "I0", 1, 0, 1},
      {"[0,0,0,0,p^7]", "II", 1, 2, 1},        {"[0,p,0,0,p^3]", "I0*", 1, 6, 0},
      {"[0,p,0,0,p^4]", "I1*", 4, 7, 0},       {"[0,p,0,0,2*p^4]", "I1*", 2, 7, 0},
  };
  for (const auto& c : cases) {
    Decided d = decide(F, c.curve);
    EXPECT_EQ(d.kodaira.str(), c.type) << c.curve;
    EXPECT_EQ(d.tamagawa, c.tamagawa) << c.curve;
    EXPECT_EQ(d.v_min_delta, c.v_min_delta) << c.curve;
    EXPECT_EQ(d.iterations, c.iterations) << c.curve;
  }
}

TEST(Tate, SmallCharacteristicExamples) {
  auto F2 = FiniteField::standard(2);
  EXPECT_EQ(decide(F2, "[0,0,1,0,0]").kodaira.str(), "I0");
  auto m = decide(F2, "[1,0,0,0,p]");
  EXPECT_EQ(m.kodaira.str(), "I1");
  EXPECT_EQ(m.v_min_delta, 1);
  auto F3 = FiniteField::standard(3);
  auto m3 = decide(F3, "[0,1,0,0,p]");
  EXPECT_EQ(m3.kodaira.str(), "I1");
  auto F4 = FiniteField::standard(4);
  auto e = decide(F4, "[p,0,p^2,0,p^3]");
  EXPECT_EQ(e.v_min_delta, 8);
}

TEST(Tate, KodairaSymbolsRoundTrip) {
  for (const char* s : {"I0", "I1", "I17", "II", "III", "IV", "I0*", "I3*", "IV*", "III*", "II*"})
    EXPECT_EQ(K::parse(s).str(), s);
  EXPECT_THROW(K::parse("V"), ParseError);
  EXPECT_THROW(K::parse("Ix"), ParseError);
}

// ---------------------------------------------------------------------------
// Oracle for p >= 5: the type of a minimal model is fixed by the valuations of
// c4, c6 and the discriminant.
// ---------------------------------------------------------------------------
struct ValTriple {
  int c4, c6, d;
};

constexpr int kInf = 1 << 20;

int val_or_inf(const PadicElem& x) {
  auto v = x.val();
  return v.kind == Valuation::Infinite ? kInf : v.v;
}

ValTriple valuations(const WeierstrassCurve& E) {
  auto inv = invariants(E);
  PadicElem c4 = inv.b2 * inv.b2 - detail::times_int(inv.b4, 24);
  PadicElem c6 = -(inv.b2 * inv.b2 * inv.b2) + detail::times_int(inv.b2 * inv.b4, 36) - detail::times_int(inv.b6, 216);
  return {val_or_inf(c4), val_or_inf(c6), val_or_inf(inv.delta)};
}

std::pair<K, int> table_type(ValTriple t) {
  int iters = 0;
  while (t.c4 >= 4 && t.c6 >= 6) {
    t.c4 -= 4;
    t.c6 -= 6;
    t.d -= 12;
    ++iters;
  }
  if (t.d == 0) return {K::make(K::I0), iters};
  if (t.c4 == 0) return {K::make(K::In, t.d), iters};
  if (t.d == 2) return {K::make(K::II), iters};
  if (t.d == 3) return {K::make(K::III), iters};
  if (t.d == 4) return {K::make(K::IV), iters};
  if (t.d == 6) return {K::make(K::I0star), iters};
  if (t.c4 == 2 && t.c6 == 3) return {K::make(K::Instar, t.d - 6), iters};
  if (t.d == 8) return {K::make(K::IVstar), iters};
  if (t.d == 9) return {K::make(K::IIIstar), iters};
  if (t.d == 10) return {K::make(K::IIstar), iters};
  ADD_FAILURE() << "valuation triple outside the table";
  return {K{}, -1};
}

PadicElem random_exact(const FiniteField* F, std::mt19937& rng, int zeros, int len) {
  Digits d(zeros + len, 0);
  for (int i = zeros; i < zeros + len; ++i) d[i] = static_cast<Code>(rng() % F->q());
  return PadicElem::exact_digits(F, d);
}

WeierstrassCurve random_curve(const Field& F, std::mt19937& rng, int max_zeros, int len) {
  const FiniteField* f = F.get();
  std::array<PadicElem, 5> a;
  static constexpr int w[5] = {1, 2, 3, 4, 6};
  for (int i = 0; i < 5; ++i) {
    int z = static_cast<int>(rng() % (max_zeros * w[i] / 6 + 2));
    a[i] = random_exact(f, rng, z, len);
  }
  return {F, a[0], a[1], a[2], a[3], a[4]};
}

TEST(Tate, AgreesWithValuationTableForLargeCharacteristic) {
  std::mt19937 rng(11);
  int checked = 0;
  std::set<int> families;
  for (int q : {5, 7, 25}) {
    auto F = FiniteField::standard(q);
    for (int i = 0; i < 1500; ++i) {
      auto E = random_curve(F, rng, 14, 3);
      auto vt = valuations(E);
      if (vt.d >= kInf) continue;
      auto [type, iters] = table_type(vt);
      Decided d = decide(E);
      ASSERT_EQ(d.kodaira, type) << E.str();
      ASSERT_EQ(d.iterations, iters) << E.str();
      ASSERT_EQ(d.v_min_delta, vt.d - 12 * iters);
      families.insert(type.family);
      ++checked;
    }
  }
  EXPECT_GT(checked, 3000);
  EXPECT_EQ(families.size(), 10u) << "random corpus should reach every family";
}

bool tamagawa_allowed(const Decided& d) {
  int c = d.tamagawa;
  switch (d.kodaira.family) {
    case K::I0: return c == 1;
    case K::In: return c == d.kodaira.n || c == (d.kodaira.n % 2 == 0 ? 2 : 1);
    case K::II:
    case K::IIstar: return c == 1;
    case K::III:
    case K::IIIstar: return c == 2;
    case K::IV:
    case K::IVstar: return c == 1 || c == 3;
    case K::I0star: return c == 1 || c == 2 || c == 4;
    case K::Instar: return c == 2 || c == 4;
  }
  return false;
}

// In every characteristic: the iteration count agrees with the brute-force
// minimality search, the minimal discriminant valuation is v(Δ) - 12 k, and the
// multiplicative types are exactly those with a unit c4 on the minimal model.
TEST(Tate, ConsistentWithMinimalitySearchInAllCharacteristics) {
  std::mt19937 rng(12);
  for (int q : {2, 3, 4, 5, 9}) {
    auto F = FiniteField::standard(q);
    for (int i = 0; i < 400; ++i) {
      auto E = random_curve(F, rng, 12, 2);
      auto vt = valuations(E);
      if (vt.d >= kInf) continue;
      Decided d = decide(E);
      ASSERT_TRUE(tamagawa_allowed(d)) << E.str() << " " << d.kodaira.str() << " c=" << d.tamagawa;
      ASSERT_EQ(d.v_min_delta, vt.d - 12 * d.iterations) << E.str();
      bool multiplicative = d.v_min_delta > 0 && vt.c4 - 4 * d.iterations == 0;
      ASSERT_EQ(d.kodaira.family == K::In, multiplicative) << E.str();
      if (d.kodaira.family == K::In) ASSERT_EQ(d.kodaira.n, *d.v_min_delta);
      if (d.kodaira.family == K::I0) ASSERT_EQ(*d.v_min_delta, 0);
      if (q <= 4 || vt.d < 24) ASSERT_EQ(std::min(d.iterations, 2), certified_iterations(E, 2)) << E.str();
    }
  }
}

TEST(Tate, OutcomeInvariantUnderCoordinateChanges) {
  std::mt19937 rng(13);
  for (int q : {2, 3, 4, 5, 7}) {
    auto F = FiniteField::standard(q);
    const FiniteField* f = F.get();
    for (int i = 0; i < 200; ++i) {
      auto E = random_curve(F, rng, 12, 3);
      if (discriminant(E).is_exact_zero()) continue;
      Transform T;
      T.u = PadicElem::constant(f, static_cast<Code>(1 + rng() % (q - 1)));
      T.l = random_exact(f, rng, 0, 3);
      T.m = random_exact(f, rng, 0, 3);
      T.n = random_exact(f, rng, 0, 3);
      ASSERT_EQ(decide(apply_transform(E, T)), decide(E)) << E.str();
    }
  }
}

TEST(Tate, GeneralUnitGivesSameTypeAtWorkingPrecision) {
  std::mt19937 rng(14);
  auto F = FiniteField::standard(3);
  const FiniteField* f = F.get();
  for (int i = 0; i < 100; ++i) {
    auto E = random_curve(F, rng, 10, 3);
    if (discriminant(E).is_exact_zero()) continue;
    Transform T = Transform::identity(f);
    T.u = random_exact(f, rng, 0, 3);
    if (T.u.digit(0) == 0) continue;
    auto E2 = apply_transform(E, T, 64);
    Decided a = decide(E), b = decide(E2);
    EXPECT_EQ(a.kodaira, b.kodaira);
    EXPECT_EQ(a.tamagawa, b.tamagawa);
    EXPECT_EQ(a.iterations, b.iterations);
  }
}

// A decided residue class must agree with every curve inside it.
TEST(Tate, DecidedClassesAreSound) {
  std::mt19937 rng(15);
  for (int q : {2, 3, 5}) {
    auto F = FiniteField::standard(q);
    const FiniteField* f = F.get();
    int decided = 0;
    for (int i = 0; i < 600; ++i) {
      int depth = 1 + static_cast<int>(rng() % 6);
      std::array<PadicElem, 5> a;
      for (auto& c : a) {
        Digits d(depth);
        for (auto& x : d) x = static_cast<Code>(rng() % q);
        c = PadicElem::class_of(f, d);
      }
      WeierstrassCurve cls(F, a[0], a[1], a[2], a[3], a[4]);
      auto out = run_tate(cls);
      if (!is_decided(out)) {
        EXPECT_GE(std::get<Undecided>(out).suggested_depth, 1);
        continue;
      }
      ++decided;
      const Decided& d = std::get<Decided>(out);
      for (int rep = 0; rep < 4; ++rep) {
        std::array<PadicElem, 5> b;
        for (int j = 0; j < 5; ++j) {
          Digits dd(a[j].digits().begin(), a[j].digits().end());
          for (int t = 0; t < 8; ++t) dd.push_back(static_cast<Code>(rng() % q));
          b[j] = PadicElem::exact_digits(f, dd);
        }
        WeierstrassCurve E(F, b[0], b[1], b[2], b[3], b[4]);
        if (discriminant(E).is_exact_zero()) continue;
        Decided e = decide(E);
        ASSERT_EQ(e.kodaira, d.kodaira) << cls.str();
        ASSERT_EQ(e.tamagawa, d.tamagawa) << cls.str();
        ASSERT_EQ(e.iterations, d.iterations) << cls.str();
        if (d.v_min_delta) ASSERT_EQ(e.v_min_delta, d.v_min_delta) << cls.str();
      }
    }
    EXPECT_GT(decided, 100);
  }
}

TEST(Tate, CoarseClassIsUndecided) {
  auto F = FiniteField::standard(5);
  auto out = run_tate(parse_curve(F, "[0,0,0,0,O(p)]"));
  ASSERT_FALSE(is_decided(out));
  EXPECT_GE(std::get<Undecided>(out).suggested_depth, 1);
  EXPECT_NE(std::string(std::get<Undecided>(out).blocking_reason), "");
}

TEST(Tate, SingularCurveRaises) {
  auto F = FiniteField::standard(5);
  try {
    run_tate(parse_curve(F, "[0,0,0,0,0]"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularCurve);
  }
}

// ---------------------------------------------------------------------------
// Reduced forms.
// ---------------------------------------------------------------------------
TEST(Tate, ReduceFormExamples) {
  auto F5 = FiniteField::standard(5);
  auto r = reduce_form(parse_curve(F5, "[0,0,1,4,0]"));
  EXPECT_EQ(r.form, FormTag::G1);
  // y^2 + y = x^3 - x completes to y^2 = x^3 - x + 1/4.
  EXPECT_EQ(r.curve, parse_curve(F5, "[0,0,0,4,4]"));
  auto F3 = FiniteField::standard(3);
  auto r3 = reduce_form(parse_curve(F3, "[1,0,0,0,1]"));
  EXPECT_EQ(r3.form, FormTag::G2);
  // y^2 + xy = x^3 + 1 completes to y^2 = x^3 + x^2/4 + 1.
  EXPECT_EQ(r3.curve, parse_curve(F3, "[0,1,0,0,1]"));
  auto F2 = FiniteField::standard(2);
  auto r2 = reduce_form(parse_curve(F2, "[1,1,0,0,1]"));
  EXPECT_EQ(r2.form, FormTag::G3);
  EXPECT_TRUE(r2.curve.a2().is_exact_zero());
}

TEST(Tate, ReduceFormKeepsDiscriminantAndType) {
  std::mt19937 rng(16);
  for (int q : {2, 3, 4, 5, 7, 9}) {
    auto F = FiniteField::standard(q);
    for (int i = 0; i < 150; ++i) {
      auto E = random_curve(F, rng, 10, 3);
      if (discriminant(E).is_exact_zero()) continue;
      auto r = reduce_form(E);
      ASSERT_EQ(r.form, form_for_characteristic(F->p()));
      ASSERT_TRUE(is_in_form(r.curve, r.form));
      ASSERT_EQ(discriminant(r.curve), discriminant(E)) << "q=" << q << " " << E.str() << " -> " << r.curve.str();
      ASSERT_EQ(decide(r.curve), decide(E));
    }
  }
}

TEST(Tate, FormNames) {
  for (auto f : {FormTag::G1, FormTag::G2, FormTag::G3, FormTag::LONG}) EXPECT_EQ(parse_form(form_name(f)), f);
  EXPECT_THROW(parse_form("G4"), ParseError);
  EXPECT_EQ(free_coefficients(FormTag::G1), 2);
  EXPECT_EQ(free_coefficients(FormTag::G2), 3);
  EXPECT_EQ(free_coefficients(FormTag::G3), 4);
  EXPECT_EQ(free_coefficients(FormTag::LONG), 5);
}

// ---------------------------------------------------------------------------
// Minimality certificates and witnesses.
// ---------------------------------------------------------------------------

// Scales a_i by π^{k w_i}, then applies a random integral translation, so the
// resulting model needs k extra iterations.
WeierstrassCurve hide_scaling(const WeierstrassCurve& E, int k, std::mt19937& rng) {
  const FiniteField* f = E.f();
  static constexpr int w[5] = {1, 2, 3, 4, 6};
  std::array<PadicElem, 5> c;
  for (int j = 0; j < 5; ++j) c[j] = padic_shift(E.coeffs()[j], w[j] * k);
  WeierstrassCurve big(E.field(), c[0], c[1], c[2], c[3], c[4]);
  return translate_xy(big, random_exact(f, rng, 0, 2), random_exact(f, rng, 0, 2), random_exact(f, rng, 0, 2));
}

TEST(Tate, CertificateFindsHiddenScaling) {
  std::mt19937 rng(17);
  for (int q : {2, 3, 4, 5}) {
    auto F = FiniteField::standard(q);
    for (int i = 0; i < 40; ++i) {
      WeierstrassCurve E0 = random_curve(F, rng, 0, 2);
      if (discriminant(E0).is_exact_zero()) continue;
      int base = decide(E0).iterations;
      auto E = hide_scaling(E0, 1, rng);
      ASSERT_EQ(decide(E).iterations, base + 1);
      auto w = minimality_certificate(E, 1);
      ASSERT_TRUE(w.has_value());
      // The witness really moves every a_i into π^{i} R_P.
      auto num = detail::translated_numerators(E.coeffs(), w->n, w->l, w->m);
      ASSERT_TRUE(detail::witness_digits_ok(num, 1, 6));
    }
  }
}

TEST(Tate, PrunedSearchMatchesNaiveEnumeration) {
  std::mt19937 rng(18);
  for (int q : {2, 3}) {
    auto F = FiniteField::standard(q);
    for (int i = 0; i < 60; ++i) {
      auto E = i % 2 ? hide_scaling(random_curve(F, rng, 0, 2), 1, rng) : random_curve(F, rng, 8, 3);
      if (discriminant(E).is_exact_zero()) continue;
      SearchOptions naive;
      naive.naive = true;
      bool a = minimality_certificate(E, 1).has_value();
      bool b = minimality_certificate(E, 1, naive).has_value();
      ASSERT_EQ(a, b) << E.str();
    }
  }
}

TEST(Tate, CertificateRejectsMinimalModels) {
  auto F = FiniteField::standard(5);
  EXPECT_FALSE(minimality_certificate(parse_curve(F, "[0,0,0,0,p^5]"), 1).has_value());
  EXPECT_TRUE(minimality_certificate(parse_curve(F, "[0,0,0,0,p^6]"), 1).has_value());
  EXPECT_EQ(certified_iterations(parse_curve(F, "[0,0,0,p^8,p^13]"), 3), 2);
  SearchOptions tiny;
  tiny.budget = 10;
  tiny.naive = true;
  try {
    minimality_certificate(parse_curve(F, "[1,1,1,1,1]"), 2, tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SearchBudgetExceeded);
  }
}

TEST(Tate, WitnessesAreUniqueInSmallCharacteristic) {
  std::mt19937 rng(19);
  for (int q : {2, 3, 4}) {
    auto F = FiniteField::standard(q);
    int p = F->p();
    for (int i = 0; i < 25; ++i) {
      auto E0 = reduce_form(random_curve(F, rng, 0, 2)).curve;
      if (discriminant(E0).is_exact_zero()) continue;
      static constexpr int w[5] = {1, 2, 3, 4, 6};
      std::array<PadicElem, 5> c;
      for (int j = 0; j < 5; ++j) c[j] = padic_shift(E0.coeffs()[j], w[j]);
      WeierstrassCurve big(F, c[0], c[1], c[2], c[3], c[4]);
      // Keep the reduced form while hiding the scaling.
      PadicElem zero = PadicElem::zero(F.get());
      WeierstrassCurve E;
      if (p == 3) {
        E = translate_xy(big, zero, zero, random_exact(F.get(), rng, 0, 2));
      } else {
        PadicElem l = random_exact(F.get(), rng, 0, 1);
        E = translate_xy(big, l, random_exact(F.get(), rng, 0, 3), l * l + big.a1() * l);
      }
      ASSERT_TRUE(is_in_form(E, form_for_characteristic(p))) << E.str();
      auto rep = witness_uniqueness_check(E, 1);
      EXPECT_EQ(rep.count, 1) << "q=" << q << " " << E.str();
      if (p == 3) {
        EXPECT_TRUE(rep.count_short.has_value());
        EXPECT_GE(*rep.count_short, 0);
      }
      // A minimal model has no witness at all.
      EXPECT_EQ(witness_uniqueness_check(E0, 1).count, decide(E0).iterations > 0 ? 1 : 0);
    }
  }
}

TEST(Tate, WitnessCheckRejectsOtherForms) {
  auto F5 = FiniteField::standard(5);
  try {
    witness_uniqueness_check(parse_curve(F5, "[0,0,0,1,1]"), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInReducedForm);
  }
  auto F3 = FiniteField::standard(3);
  try {
    witness_uniqueness_check(parse_curve(F3, "[1,0,0,1,1]"), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInReducedForm);
  }
}

}  // namespace
}  // namespace kodaira
