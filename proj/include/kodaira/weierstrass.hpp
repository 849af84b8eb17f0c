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

#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "kodaira/local_ring.hpp"

namespace kodaira {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with coefficients in R_P.
/// The Field handle keeps the residue field alive for the coefficients.
class WeierstrassCurve {
 public:
  WeierstrassCurve() = default;
  WeierstrassCurve(Field field, PadicElem a1, PadicElem a2, PadicElem a3, PadicElem a4, PadicElem a6)
      : field_(std::move(field)), a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)} {
    for (auto& c : a_) {
      if (!c.field()) c = PadicElem::zero(field_.get());
      if (c.field() != field_.get() && !c.field()->same_as(*field_))
        fail(ErrorKind::MixedFields, "curve coefficients over different fields");
    }
  }

  /// Exact curve from integer-like constants (a_i mapped into F_p).
  static WeierstrassCurve from_ints(const Field& F, std::array<long long, 5> c) {
    const FiniteField* f = F.get();
    return {F, PadicElem::from_int(f, c[0]), PadicElem::from_int(f, c[1]), PadicElem::from_int(f, c[2]),
            PadicElem::from_int(f, c[3]), PadicElem::from_int(f, c[4])};
  }

  const Field& field() const { return field_; }
  const FiniteField* f() const { return field_.get(); }
  const PadicElem& a1() const { return a_[0]; }
  const PadicElem& a2() const { return a_[1]; }
  const PadicElem& a3() const { return a_[2]; }
  const PadicElem& a4() const { return a_[3]; }
  const PadicElem& a6() const { return a_[4]; }
  const std::array<PadicElem, 5>& coeffs() const { return a_; }
  std::array<PadicElem, 5>& coeffs() { return a_; }

  bool exact() const {
    for (const auto& c : a_)
      if (!c.exact()) return false;
    return true;
  }
  int min_precision() const {
    int m = kInfinitePrecision;
    for (const auto& c : a_) m = std::min(m, c.precision());
    return m;
  }

  std::string str() const {
    std::string out = "[";
    for (int i = 0; i < 5; ++i) out += (i ? ", " : "") + a_[i].str();
    return out + "]";
  }

  friend bool operator==(const WeierstrassCurve& x, const WeierstrassCurve& y) { return x.a_ == y.a_; }

 private:
  Field field_;
  std::array<PadicElem, 5> a_;
};

struct CurveInvariants {
  PadicElem b2, b4, b6, b8, delta;
};

namespace detail {

inline PadicElem times_int(const PadicElem& a, long long k) { return padic_scale(a, a.field()->from_int(k)); }

}  // namespace detail

inline CurveInvariants invariants(const std::array<PadicElem, 5>& a) {
  using detail::times_int;
  const auto &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
  CurveInvariants inv;
  PadicElem a1sq = a1 * a1;
  inv.b2 = a1sq + times_int(a2, 4);
  inv.b4 = a1 * a3 + times_int(a4, 2);
  inv.b6 = a3 * a3 + times_int(a6, 4);
  inv.b8 = a1sq * a6 + times_int(a2 * a6, 4) - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  const auto &b2 = inv.b2, &b4 = inv.b4, &b6 = inv.b6, &b8 = inv.b8;
  inv.delta = -(b2 * b2 * b8) - times_int(b4 * b4 * b4, 8) - times_int(b6 * b6, 27) + times_int(b2 * b4 * b6, 9);
  return inv;
}

inline CurveInvariants invariants(const WeierstrassCurve& E) { return invariants(E.coeffs()); }

inline PadicElem discriminant(const WeierstrassCurve& E) { return invariants(E).delta; }

/// x -> u^2 x + n, y -> u^3 y + l u^2 x + m, then divide by u^6.
/// In the (r, s, t) names common in the literature: n = r, l = s, m = t.
struct Transform {
  PadicElem u, l, m, n;

  static Transform identity(const FiniteField* F) {
    return {PadicElem::constant(F, 1), PadicElem::zero(F), PadicElem::zero(F), PadicElem::zero(F)};
  }
  static Transform translation(const PadicElem& l, const PadicElem& m, const PadicElem& n) {
    return {PadicElem::constant(l.field(), 1), l, m, n};
  }
};

/// T1 followed by T2 as a single transform.
inline Transform compose(const Transform& T1, const Transform& T2) {
  const PadicElem &u1 = T1.u, &r1 = T1.n, &s1 = T1.l, &t1 = T1.m;
  const PadicElem &u2 = T2.u, &r2 = T2.n, &s2 = T2.l, &t2 = T2.m;
  PadicElem u1sq = u1 * u1;
  Transform T;
  T.u = u1 * u2;
  T.n = r1 + u1sq * r2;
  T.l = s1 + u1 * s2;
  T.m = t1 + u1sq * u1 * t2 + s1 * u1sq * r2;
  return T;
}

namespace detail {

/// Numerators of the transformed coefficients before dividing by u^i.
inline std::array<PadicElem, 5> translated_numerators(const std::array<PadicElem, 5>& a, const PadicElem& r,
                                                      const PadicElem& s, const PadicElem& t) {
  const auto &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
  PadicElem rr = r * r;
  std::array<PadicElem, 5> out;
  out[0] = a1 + times_int(s, 2);
  out[1] = a2 - s * a1 + times_int(r, 3) - s * s;
  out[2] = a3 + r * a1 + times_int(t, 2);
  out[3] = a4 - s * a3 + times_int(r * a2, 2) - (t + r * s) * a1 + times_int(rr, 3) - times_int(s * t, 2);
  out[4] = a6 + r * a4 + rr * a2 + rr * r - t * a3 - t * t - r * t * a1;
  return out;
}

/// Divides x by π^k, reporting NotIntegral / InsufficientPrecision.
inline PadicElem divide_by_pi_power(const PadicElem& x, int k) {
  if (k == 0) return x;
  Valuation v = x.val();
  if (v.kind == Valuation::Exact && v.v < k) fail(ErrorKind::NotIntegral, "transformed coefficient leaves R_P");
  if (v.kind == Valuation::AtLeast && v.v < k)
    fail(ErrorKind::InsufficientPrecision, "integrality of a transformed coefficient is undecided");
  return padic_shift(x, -k);
}

}  // namespace detail

/// Applies T.  A unit u that is not a constant is inverted as a power series
/// to `working_precision` digits, so the result is a class curve.
inline WeierstrassCurve apply_transform(const WeierstrassCurve& E, const Transform& T, int working_precision = 64) {
  const FiniteField* F = E.f();
  auto num = detail::translated_numerators(E.coeffs(), T.n, T.l, T.m);
  if (T.u.is_exact_zero()) fail(ErrorKind::DivisionByZero, "transform with u = 0");
  Valuation vu = T.u.val();
  if (vu.kind != Valuation::Exact) fail(ErrorKind::InsufficientPrecision, "valuation of u is undecided");
  int e = vu.v;
  PadicElem w = padic_shift(T.u, -e);
  static constexpr int kWeights[5] = {1, 2, 3, 4, 6};
  std::array<PadicElem, 5> out;
  if (w.exact() && w.length() == 1) {
    Code winv = F->inv(w.digits()[0]);
    Code scale = 1;
    for (int i = 0, prev = 0; i < 5; ++i) {
      for (int j = prev; j < kWeights[i]; ++j) scale = F->mul(scale, winv);
      prev = kWeights[i];
      out[i] = detail::divide_by_pi_power(padic_scale(num[i], scale), e * kWeights[i]);
    }
  } else {
    PadicElem winv = padic_unit_inverse(w, working_precision);
    PadicElem scale = PadicElem::constant(F, 1);
    for (int i = 0, prev = 0; i < 5; ++i) {
      for (int j = prev; j < kWeights[i]; ++j) scale = scale * winv;
      prev = kWeights[i];
      out[i] = detail::divide_by_pi_power(num[i] * scale, e * kWeights[i]);
    }
  }
  return {E.field(), out[0], out[1], out[2], out[3], out[4]};
}

/// x -> x + n, y -> y + l x + m.
inline WeierstrassCurve translate_xy(const WeierstrassCurve& E, const PadicElem& l, const PadicElem& m,
                                     const PadicElem& n) {
  auto num = detail::translated_numerators(E.coeffs(), n, l, m);
  return {E.field(), num[0], num[1], num[2], num[3], num[4]};
}

/// Parses "[a1, a2, a3, a4, a6]"; each entry in the local ring grammar.
inline WeierstrassCurve parse_curve(const Field& F, std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i >= text.size() || text[i] != '[') throw ParseError(i, "expected '['");
  std::size_t close = text.find_last_of(']');
  if (close == std::string_view::npos || close < i) throw ParseError(text.size(), "expected ']'");
  for (std::size_t j = close + 1; j < text.size(); ++j)
    if (!std::isspace(static_cast<unsigned char>(text[j]))) throw ParseError(j, "trailing characters after ']'");
  std::vector<PadicElem> entries;
  std::size_t start = i + 1;
  int depth = 0;
  for (std::size_t j = i + 1; j <= close; ++j) {
    char c = text[j];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ',' && depth == 0) || j == close) {
      std::string_view piece = text.substr(start, j - start);
      try {
        entries.push_back(parse_padic(F, piece));
      } catch (const ParseError& e) {
        throw ParseError(start + e.position(), "bad coefficient");
      }
      start = j + 1;
    }
  }
  if (entries.size() != 5) throw ParseError(close, "expected five coefficients");
  return {F, entries[0], entries[1], entries[2], entries[3], entries[4]};
}

}  // namespace kodaira
