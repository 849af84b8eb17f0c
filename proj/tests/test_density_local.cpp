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

#include <cmath>

#include "kodaira/density_local.hpp"

namespace kodaira {
namespace {

using K = KodairaType;

Rational R(long long n, long long d) { return Rational(BigInt(n), BigInt(d)); }

DensityKey key(K t, int c, int k = 0) { return {t, c, k}; }

TEST(DensityLocal, ClosedFormValues) {
  EXPECT_EQ(closed_form(2, key(K::make(K::IIstar), 1)), R(1, 1024));
  EXPECT_EQ(closed_form(2, key(K::make(K::I0), 1)), R(1, 2));
  EXPECT_EQ(closed_form(3, key(K::make(K::In, 1), 1)), R(4, 27));
  EXPECT_EQ(closed_form(3, key(K::make(K::In, 2), 2)), R(4, 81));
  EXPECT_EQ(closed_form(5, key(K::make(K::In, 3), 3)), R(16, 2 * 3125));
  EXPECT_EQ(closed_form(5, key(K::make(K::In, 3), 1)), R(16, 2 * 3125));
  EXPECT_EQ(closed_form(5, key(K::make(K::IV), 3)), R(4, 2 * 3125));
  EXPECT_EQ(closed_form(4, key(K::make(K::Instar, 2), 4)), R(9, 2 * 262144));
  EXPECT_EQ(closed_form(2, key(K::make(K::IIstar), 1, 1)), R(1, 1024LL * 1024));
}

TEST(DensityLocal, ThreeWaySplitOfI0Star) {
  // The cubic counts (Q^2-1)/3, (Q^2-Q)/2, (Q^2-3Q+2)/6 partition Q^2-Q monic
  // squarefree cubics of the shape in step 6, so the three densities add up
  // to (Q-1)/Q^6.
  for (long long Q : {2, 3, 4, 5, 7, 8, 9, 16, 25, 1024}) {
    Rational sum = closed_form(Q, key(K::make(K::I0star), 1)) + closed_form(Q, key(K::make(K::I0star), 2)) +
                   closed_form(Q, key(K::make(K::I0star), 4));
    EXPECT_EQ(sum, Rational(BigInt(Q - 1), big_pow(Q, 6))) << Q;
  }
}

TEST(DensityLocal, TotalsSumToOne) {
  for (long long Q : {2, 3, 4, 5, 7, 9, 11, 1024}) {
    auto t = closed_form_totals(Q);
    EXPECT_EQ(t.grand_total_all_k, Rational(1)) << Q;
    EXPECT_EQ(t.grand_total_k0, Rational(1) - inverse_power(Q, 10)) << Q;
    EXPECT_EQ(t.per_type.size(), 10u);
  }
}

TEST(DensityLocal, AdmissibilityAndErrors) {
  EXPECT_TRUE(admissible(key(K::make(K::In, 4), 2)));
  EXPECT_TRUE(admissible(key(K::make(K::In, 4), 4)));
  EXPECT_FALSE(admissible(key(K::make(K::In, 4), 1)));
  EXPECT_FALSE(admissible(key(K::make(K::In, 3), 2)));
  EXPECT_FALSE(admissible(key(K::make(K::III), 1)));
  EXPECT_FALSE(admissible(key(K::make(K::I0), 1, -1)));
  try {
    closed_form(5, key(K::make(K::II), 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InadmissibleKey);
  }
  EXPECT_THROW(closed_form(1, key(K::make(K::I0), 1)), Error);
  auto keys = table_keys(3, 1);
  for (const auto& k : keys) EXPECT_TRUE(admissible(k)) << k.str();
  // Per k: I0, I1, I2, I3 (two), II, III, IV (two), I0* (three), I1*..I3* (two each), IV* (two), III*, II*.
  EXPECT_EQ(keys.size(), 2u * 22u);
}

// ---------------------------------------------------------------------------
// Exact enumeration against a flat oracle: every class at a fixed depth run
// through Tate's algorithm once, with no refinement tree.
// ---------------------------------------------------------------------------
std::map<DensityKey, Rational> flat_oracle(FormTag form, const Field& field, int depth, Rational* undecided) {
  const FiniteField* F = field.get();
  int Q = F->q();
  auto idx = free_indices(form);
  int digits = static_cast<int>(idx.size()) * depth;
  long long total = 1;
  for (int i = 0; i < digits; ++i) total *= Q;
  std::map<DensityKey, long long> hits;
  long long undec = 0;
  std::vector<Code> d(digits);
  for (long long x = 0; x < total; ++x) {
    long long v = x;
    for (auto& c : d) {
      c = static_cast<Code>(v % Q);
      v /= Q;
    }
    std::array<PadicElem, 5> a;
    for (auto& c : a) c = PadicElem::zero(F);
    for (std::size_t j = 0; j < idx.size(); ++j) a[idx[j]] = PadicElem::class_of(F, d.data() + j * depth, depth);
    auto out = run_tate(WeierstrassCurve(field, a[0], a[1], a[2], a[3], a[4]));
    if (auto dec = std::get_if<Decided>(&out))
      ++hits[key_of(*dec)];
    else
      ++undec;
  }
  std::map<DensityKey, Rational> m;
  for (const auto& [k, h] : hits) m[k] = Rational(BigInt(h), BigInt(total));
  *undecided = Rational(BigInt(undec), BigInt(total));
  return m;
}

struct FlatCase {
  FormTag form;
  int q;
  int depth;
};

TEST(DensityLocal, EnumerationMatchesFlatOracle) {
  for (auto c : {FlatCase{FormTag::G1, 5, 3}, FlatCase{FormTag::G1, 7, 2}, FlatCase{FormTag::G2, 3, 3},
                 FlatCase{FormTag::G3, 2, 4}, FlatCase{FormTag::G3, 4, 2}, FlatCase{FormTag::LONG, 2, 3}}) {
    auto F = FiniteField::standard(c.q);
    EnumerateOptions opt;
    opt.max_depth = c.depth;
    auto rep = enumerate_exact(c.form, F, opt);
    Rational undecided;
    auto oracle = flat_oracle(c.form, F, c.depth, &undecided);
    EXPECT_EQ(rep.decided, oracle) << form_name(c.form) << " Q=" << c.q;
    EXPECT_EQ(rep.undecided, undecided) << form_name(c.form) << " Q=" << c.q;
    EXPECT_EQ(rep.total(), Rational(1));
  }
}

TEST(DensityLocal, UndecidedMassShrinksWithDepth) {
  auto F = FiniteField::standard(3);
  EnumerateOptions opt;
  opt.max_depth = 5;
  auto rep = enumerate_exact(FormTag::G2, F, opt);
  ASSERT_EQ(rep.undecided_by_depth.size(), 6u);
  for (std::size_t d = 1; d < rep.undecided_by_depth.size(); ++d)
    EXPECT_LE(rep.undecided_by_depth[d], rep.undecided_by_depth[d - 1]);
  EXPECT_LT(rep.undecided_by_depth.back(), rep.undecided_by_depth[1]);
  EXPECT_LE(rep.singular_like, rep.undecided);
  EXPECT_EQ(rep.depth, 5);
}

TEST(DensityLocal, ClosedFormsLieInsideBrackets) {
  for (auto c : {FlatCase{FormTag::G1, 5, 6}, FlatCase{FormTag::G1, 7, 5}, FlatCase{FormTag::G2, 3, 5},
                 FlatCase{FormTag::G3, 2, 6}}) {
    auto F = FiniteField::standard(c.q);
    EnumerateOptions opt;
    opt.max_depth = c.depth;
    auto rep = enumerate_exact(c.form, F, opt);
    int pass = 0;
    for (const auto& v : compare_table(rep, 6, 1)) {
      EXPECT_NE(v.verdict, Verdict::Fail) << form_name(c.form) << " Q=" << c.q << " " << v.key.str();
      pass += v.verdict == Verdict::Pass;
    }
    EXPECT_GT(pass, 10);
  }
}

TEST(DensityLocal, ShallowTypesAreExactAtModestDepth) {
  // For p >= 5 the types I0 through IV are settled within three digits, so
  // their masses are exact by depth 6.
  auto F = FiniteField::standard(5);
  EnumerateOptions opt;
  opt.max_depth = 6;
  auto rep = enumerate_exact(FormTag::G1, F, opt);
  for (auto k : {key(K::make(K::I0), 1), key(K::make(K::In, 1), 1), key(K::make(K::II), 1), key(K::make(K::III), 2),
                 key(K::make(K::IV), 1), key(K::make(K::IV), 3)})
    EXPECT_EQ(rep.decided_mass(k), closed_form(5, k)) << k.str();
}

TEST(DensityLocal, WorkerCountDoesNotChangeResults) {
  auto F = FiniteField::standard(2);
  EnumerateOptions a, b;
  a.max_depth = b.max_depth = 5;
  b.workers = 3;
  auto ra = enumerate_exact(FormTag::G3, F, a), rb = enumerate_exact(FormTag::G3, F, b);
  EXPECT_EQ(ra.decided, rb.decided);
  EXPECT_EQ(ra.undecided_by_depth, rb.undecided_by_depth);

  McOptions m1, m3;
  m1.samples = m3.samples = 40000;
  m3.workers = 3;
  auto e1 = estimate_mc(FormTag::G3, F, m1), e3 = estimate_mc(FormTag::G3, F, m3);
  ASSERT_EQ(e1.entries.size(), e3.entries.size());
  for (const auto& [k, v] : e1.entries) EXPECT_EQ(v.hits, e3.entries.at(k).hits) << k.str();
  EXPECT_EQ(e1.unresolved, e3.unresolved);
}

TEST(DensityLocal, BudgetStopsEnumerationEarly) {
  auto F = FiniteField::standard(5);
  EnumerateOptions opt;
  opt.max_depth = 8;
  opt.class_budget = 30000;
  auto rep = enumerate_exact(FormTag::G1, F, opt);
  EXPECT_TRUE(rep.budget_exhausted);
  EXPECT_LT(rep.depth, 8);
  EXPECT_LE(rep.class_budget_used, 30000);
  EXPECT_EQ(rep.total(), Rational(1));
}

TEST(DensityLocal, FormMustMatchCharacteristic) {
  auto F = FiniteField::standard(2);
  try {
    enumerate_exact(FormTag::G1, F);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MismatchedCharacteristic);
  }
}

// ---------------------------------------------------------------------------
// compare_table on hand-built reports.
// ---------------------------------------------------------------------------
TEST(DensityLocal, CompareTableVerdicts) {
  DensityReport rep;
  rep.Q = 2;
  auto ii = key(K::make(K::II), 1);
  auto iii = key(K::make(K::III), 2);
  rep.decided[ii] = closed_form(2, ii);          // exact hit
  rep.decided[iii] = closed_form(2, iii) * 2;    // too much mass
  rep.decided[key(K::make(K::III), 1)] = R(1, 64);  // inadmissible
  rep.undecided = R(1, 512);
  std::map<DensityKey, Verdict> got;
  for (const auto& v : compare_table(rep, 2, 0)) got[v.key] = v.verdict;
  EXPECT_EQ(got[ii], Verdict::Pass);
  EXPECT_EQ(got[iii], Verdict::Fail);
  EXPECT_EQ(got[key(K::make(K::III), 1)], Verdict::Fail);
  // No decided mass and a closed form larger than the undecided mass.
  EXPECT_EQ(got[key(K::make(K::I0), 1)], Verdict::Fail);
  // No decided mass but the closed form fits in the undecided mass.
  EXPECT_EQ(got[key(K::make(K::IIstar), 1, 0)], Verdict::Skip);
}

// ---------------------------------------------------------------------------
// Monte Carlo.
// ---------------------------------------------------------------------------
TEST(DensityLocal, MonteCarloAgreesWithClosedForms) {
  auto F = FiniteField::standard(3);
  McOptions opt;
  opt.samples = 200000;
  opt.seed = 7;
  auto rep = estimate_mc(FormTag::G2, F, opt);
  EXPECT_EQ(rep.samples, 200000u);
  for (const auto& [k, e] : rep.entries) {
    if (!admissible(k)) ADD_FAILURE() << "inadmissible key " << k.str();
    double closed = boost::rational_cast<double>(closed_form(3, k));
    double sd = std::sqrt(closed * (1 - closed) / 200000.0);
    EXPECT_LE(std::abs(e.estimate - closed), 5 * sd + 1e-12) << k.str();
  }
  auto big = rep.iterations_at_least(1);
  EXPECT_LE(big.hits, 10u);  // mass 3^-10 per sample
}

TEST(DensityLocal, MonteCarloSeedChangesSamples) {
  auto F = FiniteField::standard(5);
  McOptions a, b;
  a.samples = b.samples = 5000;
  b.seed = 2;
  auto ra = estimate_mc(FormTag::G1, F, a), rb = estimate_mc(FormTag::G1, F, b);
  bool differ = false;
  for (const auto& [k, v] : ra.entries)
    if (!rb.entries.count(k) || rb.entries.at(k).hits != v.hits) differ = true;
  EXPECT_TRUE(differ);
  auto again = estimate_mc(FormTag::G1, F, a);
  for (const auto& [k, v] : ra.entries) EXPECT_EQ(again.entries.at(k).hits, v.hits);
}

// ---------------------------------------------------------------------------
// Reduction maps push the uniform measure forward to the uniform measure.
// ---------------------------------------------------------------------------
TEST(DensityLocal, PushforwardIsUniform) {
  struct Case {
    int q, depth;
  };
  for (auto c : {Case{2, 1}, Case{2, 2}, Case{2, 3}, Case{3, 1}, Case{3, 2}, Case{4, 1}, Case{5, 1}, Case{7, 1}}) {
    auto F = FiniteField::standard(c.q);
    auto rep = pushforward_uniformity(F, c.depth);
    EXPECT_EQ(rep.max_deviation, Rational(0)) << "Q=" << c.q << " depth=" << c.depth;
    EXPECT_EQ(rep.form, form_for_characteristic(F->p()));
  }
  try {
    pushforward_uniformity(FiniteField::standard(5), 3, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
}

}  // namespace
}  // namespace kodaira
