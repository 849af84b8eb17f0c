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

#include "kodaira/residue_field.hpp"

namespace kodaira {
namespace {

// Schoolbook arithmetic on integer coefficient vectors mod (p, modulus), kept
// apart from the table-driven field on purpose.
struct NaiveField {
  int p;
  std::vector<int> modulus;  // monic, low to high
  int n() const { return static_cast<int>(modulus.size()) - 1; }

  std::vector<int> mul(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> r(2 * n(), 0);
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    for (int i = 2 * n() - 1; i >= n(); --i) {
      int c = r[i];
      if (!c) continue;
      for (int j = 0; j <= n(); ++j) r[i - n() + j] = ((r[i - n() + j] - c * modulus[j]) % p + p) % p;
    }
    r.resize(n());
    return r;
  }
  std::vector<int> add(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> r(n());
    for (int i = 0; i < n(); ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
};

struct FieldCase {
  int q, p;
  std::vector<int> modulus;
};

std::vector<FieldCase> table_fields() {
  std::vector<FieldCase> out;
  for (int q : {2, 3, 5, 7}) out.push_back({q, q, {0, 1}});
  for (int q : {4, 8, 9, 16, 25, 27}) {
    int p = 2;
    while (q % p) ++p;
    out.push_back({q, p, *FiniteField::default_modulus(q)});
  }
  return out;
}

TEST(ResidueField, SpecExamples) {
  auto F4 = FiniteField::standard(4);
  auto F5 = FiniteField::standard(5);
  auto F9 = FiniteField::standard(9);
  FieldElem g4 = FieldElem::parse(F4, "g");
  EXPECT_EQ((g4 * g4).str(), "g+1");
  EXPECT_EQ((FieldElem::from_int(F5, 3) * FieldElem::from_int(F5, 4)).str(), "2");
  FieldElem g9 = FieldElem::parse(F9, "g");
  EXPECT_EQ((g9 * g9).str(), "2");
  EXPECT_EQ(ff_inv(FieldElem::from_int(F5, 2)).str(), "3");
  EXPECT_EQ(ff_inv(g4).str(), "g+1");
  EXPECT_THROW(ff_inv(FieldElem::from_int(F5, 0)), Error);
  try {
    ff_inv(FieldElem::from_int(F5, 0));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
  }
}

TEST(ResidueField, MixedFieldsRejected) {
  auto F5 = FiniteField::standard(5);
  auto F7 = FiniteField::standard(7);
  try {
    (void)(FieldElem::from_int(F5, 1) + FieldElem::from_int(F7, 1));
    FAIL() << "expected MixedFields";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MixedFields);
  }
}

TEST(ResidueField, InvalidSpecs) {
  auto kind_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::EmptyS;  // sentinel: nothing thrown
  };
  EXPECT_EQ(kind_of([] { FiniteField::prime(6); }), ErrorKind::InvalidField);
  EXPECT_EQ(kind_of([] { FiniteField::make(2, 2, {1, 0, 1}); }), ErrorKind::InvalidField);  // (g+1)^2
  EXPECT_EQ(kind_of([] { FiniteField::make(2, 2, {1, 1, 0}); }), ErrorKind::NotMonic);
  EXPECT_EQ(kind_of([] { FiniteField::make(3, 2, {1, 1}); }), ErrorKind::WrongDegree);
  EXPECT_EQ(kind_of([] { FiniteField::standard(6); }), ErrorKind::InvalidField);
  // A prime power with no default modulus needs an explicit one.
  EXPECT_EQ(kind_of([] { FiniteField::standard(32); }), ErrorKind::UnsupportedField);
}

TEST(ResidueField, ArithmeticMatchesSchoolbookOracle) {
  for (const auto& fc : table_fields()) {
    auto F = FiniteField::standard(fc.q);
    NaiveField N{fc.p, fc.modulus};
    for (int a = 0; a < fc.q; ++a)
      for (int b = 0; b < fc.q; ++b) {
        auto ca = F->coeffs(static_cast<Code>(a)), cb = F->coeffs(static_cast<Code>(b));
        ASSERT_EQ(F->coeffs(F->mul(a, b)), N.mul(ca, cb)) << "Q=" << fc.q << " a=" << a << " b=" << b;
        ASSERT_EQ(F->coeffs(F->add(a, b)), N.add(ca, cb)) << "Q=" << fc.q;
      }
  }
}

TEST(ResidueField, InverseAndFrobeniusProperties) {
  for (const auto& fc : table_fields()) {
    if (fc.q > 25) continue;
    auto F = FiniteField::standard(fc.q);
    for (int a = 1; a < fc.q; ++a) ASSERT_EQ(F->mul(a, F->inv(a)), 1) << "Q=" << fc.q;
    auto frob = [&](Code x) { return F->pow(x, fc.p); };
    for (int a = 0; a < fc.q; ++a)
      for (int b = 0; b < fc.q; ++b) {
        ASSERT_EQ(frob(F->add(a, b)), F->add(frob(a), frob(b)));
        ASSERT_EQ(frob(F->mul(a, b)), F->mul(frob(a), frob(b)));
      }
    for (int a = 0; a < fc.q; ++a) ASSERT_EQ(frob(F->frobenius_inverse(a)), a);
  }
}

TEST(ResidueField, SquareRoots) {
  auto F5 = FiniteField::standard(5);
  auto r4 = ff_sqrt(FieldElem::from_int(F5, 4));
  ASSERT_EQ(r4.size(), 2u);
  EXPECT_EQ(r4[0].str(), "2");
  EXPECT_EQ(r4[1].str(), "3");
  EXPECT_TRUE(ff_sqrt(FieldElem::from_int(F5, 2)).empty());
  auto F4 = FiniteField::standard(4);
  auto rg = ff_sqrt(FieldElem::parse(F4, "g"));
  ASSERT_EQ(rg.size(), 1u);
  EXPECT_EQ(rg[0].str(), "g+1");

  for (const auto& fc : table_fields()) {
    auto F = FiniteField::standard(fc.q);
    for (int a = 0; a < fc.q; ++a) {
      FieldElem x(F, static_cast<Code>(a));
      auto roots = ff_sqrt(x * x);
      bool found = false;
      for (const auto& r : roots) found |= r == x;
      ASSERT_TRUE(found) << "Q=" << fc.q << " a=" << a;
      // Exhaustive count of square roots.
      std::size_t count = 0;
      for (int b = 0; b < fc.q; ++b) count += F->mul(b, b) == a;
      ASSERT_EQ(ff_sqrt(x).size(), count);
      if (fc.p == 2) {
        ASSERT_EQ(ff_sqrt(x).size(), 1u);
        ASSERT_EQ(ff_sqrt(x)[0], ff_sqrt_frobenius(x));
      }
    }
  }
}

TEST(ResidueField, PolyRootsExamples) {
  auto F5 = FiniteField::standard(5);
  auto roots = poly_roots(*F5, CodePoly{0, 4, 0, 1});  // T^3 - T
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_EQ(roots[0].root, 0);
  EXPECT_EQ(roots[1].root, 1);
  EXPECT_EQ(roots[2].root, 4);
  for (const auto& r : roots) EXPECT_EQ(r.multiplicity, 1);
  auto F2 = FiniteField::standard(2);
  EXPECT_TRUE(poly_roots(*F2, CodePoly{1, 1, 1}).empty());
  for (int q : {2, 3, 4, 5, 9}) {
    auto F = FiniteField::standard(q);
    auto t3 = poly_roots(*F, CodePoly{0, 0, 0, 1});
    ASSERT_EQ(t3.size(), 1u);
    EXPECT_EQ(t3[0].root, 0);
    EXPECT_EQ(t3[0].multiplicity, 3);
  }
  try {
    poly_roots(*F5, CodePoly{0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroPolynomial);
  }
}

// Roots times the cofactor reproduce f.
TEST(ResidueField, PolyRootsRefactorProperty) {
  std::mt19937 rng(11);
  for (int q : {2, 3, 4, 5, 7, 8, 9}) {
    auto F = FiniteField::standard(q);
    for (int trial = 0; trial < 300; ++trial) {
      int deg = 1 + static_cast<int>(rng() % 4);
      CodePoly f(deg + 1);
      for (auto& c : f) c = static_cast<Code>(rng() % q);
      f.back() = 1;
      CodePoly prod{1};
      for (const auto& r : poly_roots(*F, f))
        for (int m = 0; m < r.multiplicity; ++m) prod = poly::mul(*F, prod, CodePoly{F->neg(r.root), 1});
      auto [cof, rem] = poly::divmod(*F, f, prod);
      ASSERT_TRUE(rem.empty());
      ASSERT_EQ(poly::mul(*F, prod, cof), f);
      // The cofactor has no roots left.
      for (int x = 0; x < q; ++x)
        if (poly::degree(cof) >= 1) ASSERT_NE(poly::eval(*F, cof, static_cast<Code>(x)), 0);
    }
  }
}

TEST(ResidueField, CubicStructureExamples) {
  auto F3 = FiniteField::standard(3);
  auto s1 = cubic_structure(*F3, 0, 0, F3->neg(1));  // T^3 - 1
  EXPECT_EQ(s1.kind, CubicStructure::Triple);
  EXPECT_EQ(s1.repeated, 1);
  auto F5 = FiniteField::standard(5);
  EXPECT_EQ(cubic_structure(*F5, 0, 4, 0).kind, CubicStructure::Distinct3);
  auto s3 = cubic_structure(*F5, 0, F5->neg(3), 2);  // (T-1)^2 (T+2)
  EXPECT_EQ(s3.kind, CubicStructure::DoubleSimple);
  EXPECT_EQ(s3.repeated, 1);
  ASSERT_TRUE(s3.simple);
  EXPECT_EQ(*s3.simple, 3);

  std::vector<FieldElem> not_monic{FieldElem(F5, 1), FieldElem(F5, 0), FieldElem(F5, 0), FieldElem(F5, 2)};
  try {
    cubic_structure(not_monic);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMonic);
  }
  std::vector<FieldElem> quadratic{FieldElem(F5, 1), FieldElem(F5, 0), FieldElem(F5, 1)};
  try {
    cubic_structure(quadratic);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongDegree);
  }
}

// Every cubic over F_Q splits over F_{Q^6}.  Represent F_{Q^6} as polynomials
// over F_Q modulo an irreducible sextic and count distinct roots there by
// exhaustive evaluation: 3, 2 and 1 distinct roots mean Distinct3,
// DoubleSimple and Triple.
TEST(ResidueField, CubicStructureAgreesWithSexticExtensionOracle) {
  for (int q : {2, 3, 4, 5}) {
    auto F = FiniteField::standard(q);
    CodePoly sextic;
    for (long long idx = 0;; ++idx) {
      CodePoly f(7, 0);
      long long v = idx;
      for (int i = 0; i < 6; ++i, v /= q) f[i] = static_cast<Code>(v % q);
      f[6] = 1;
      if (f[0] != 0 && poly::is_irreducible(*F, f)) {
        sextic = f;
        break;
      }
    }
    long long big = 1;
    for (int i = 0; i < 6; ++i) big *= q;
    std::vector<CodePoly> elems(big);
    for (long long idx = 0; idx < big; ++idx) {
      CodePoly e(6, 0);
      long long v = idx;
      for (int i = 0; i < 6; ++i, v /= q) e[i] = static_cast<Code>(v % q);
      poly::trim(e);
      elems[idx] = e;
    }
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d) {
          int distinct = 0;
          for (const auto& x : elems) {
            // Horner: ((x + b) x + c) x + d mod sextic.
            CodePoly acc = poly::add(*F, x, CodePoly{static_cast<Code>(b)});
            acc = poly::mod(*F, poly::mul(*F, acc, x), sextic);
            acc = poly::add(*F, acc, CodePoly{static_cast<Code>(c)});
            acc = poly::mod(*F, poly::mul(*F, acc, x), sextic);
            acc = poly::add(*F, acc, CodePoly{static_cast<Code>(d)});
            distinct += acc.empty();
          }
          auto s = cubic_structure(*F, b, c, d);
          int expected = s.kind == CubicStructure::Distinct3 ? 3 : (s.kind == CubicStructure::DoubleSimple ? 2 : 1);
          ASSERT_EQ(distinct, expected) << "Q=" << q << " cubic " << b << "," << c << "," << d;
        }
  }
}

TEST(ResidueField, FormatAndParseRoundTrip) {
  for (int q : {4, 8, 9, 16, 25, 27}) {
    auto F = FiniteField::standard(q);
    for (int a = 0; a < q; ++a) ASSERT_EQ(F->parse(F->format(a)), a) << F->format(a);
  }
  auto F27 = FiniteField::standard(27);
  EXPECT_EQ(F27->format(F27->parse("2*g^2+1")), "2*g^2+1");
  EXPECT_THROW(F27->parse("2*h"), ParseError);
}

TEST(ResidueField, TowerExtension) {
  auto F2 = FiniteField::standard(2);
  auto F4 = FiniteField::extension(F2, CodePoly{1, 1, 1}, "u");
  auto F16 = FiniteField::extension(F4, CodePoly{F4->parse("u"), 1, 1}, "v");  // v^2 + v + u
  EXPECT_EQ(F16->q(), 16);
  EXPECT_EQ(F16->degree(), 4);
  for (int a = 1; a < 16; ++a) ASSERT_EQ(F16->mul(a, F16->inv(a)), 1);
  Code v = F16->parse("v");
  EXPECT_EQ(F16->add(F16->mul(v, v), F16->add(v, F16->parse("u"))), 0);
}

}  // namespace
}  // namespace kodaira
