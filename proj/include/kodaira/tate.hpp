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
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "kodaira/weierstrass.hpp"

namespace kodaira {

struct KodairaType {
  enum Family : std::uint8_t { I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar };
  Family family = I0;
  int n = 0;  // N for In and Instar, otherwise 0

  static KodairaType make(Family f, int n = 0) { return {f, n}; }

  std::string str() const {
    switch (family) {
      case I0: return "I0";
      case In: return "I" + std::to_string(n);
      case II: return "II";
      case III: return "III";
      case IV: return "IV";
      case I0star: return "I0*";
      case Instar: return "I" + std::to_string(n) + "*";
      case IVstar: return "IV*";
      case IIIstar: return "III*";
      case IIstar: return "II*";
    }
    return "?";
  }

  static KodairaType parse(std::string_view s) {
    if (s == "II") return {II, 0};
    if (s == "III") return {III, 0};
    if (s == "IV") return {IV, 0};
    if (s == "IV*") return {IVstar, 0};
    if (s == "III*") return {IIIstar, 0};
    if (s == "II*") return {IIstar, 0};
    bool star = !s.empty() && s.back() == '*';
    std::string_view body = star ? s.substr(0, s.size() - 1) : s;
    if (body.size() >= 2 && body[0] == 'I') {
      int n = 0;
      for (char c : body.substr(1)) {
        if (c < '0' || c > '9') throw ParseError(0, "bad Kodaira symbol '" + std::string(s) + "'");
        n = n * 10 + (c - '0');
      }
      if (n == 0) return {star ? I0star : I0, 0};
      return {star ? Instar : In, n};
    }
    throw ParseError(0, "bad Kodaira symbol '" + std::string(s) + "'");
  }

  friend auto operator<=>(const KodairaType&, const KodairaType&) = default;
};

struct Decided {
  KodairaType kodaira;
  int tamagawa = 1;
  int iterations = 0;
  /// v(Δ) of the minimal model.  Always known for exact curves; for residue
  /// classes it is empty when the class does not pin down v(Δ).
  std::optional<int> v_min_delta;

  friend bool operator==(const Decided&, const Decided&) = default;
};

struct Undecided {
  const char* blocking_reason = "";
  int suggested_depth = 1;
};

using TateOutcome = std::variant<Decided, Undecided>;

inline bool is_decided(const TateOutcome& o) { return std::holds_alternative<Decided>(o); }

struct TateOptions {
  int iteration_cap = 8;
};

// ---------------------------------------------------------------------------
// Reduced forms.
// ---------------------------------------------------------------------------
enum class FormTag { G1, G2, G3, LONG };

inline std::string form_name(FormTag f) {
  switch (f) {
    case FormTag::G1: return "G1";
    case FormTag::G2: return "G2";
    case FormTag::G3: return "G3";
    case FormTag::LONG: return "LONG";
  }
  return "?";
}

inline FormTag parse_form(std::string_view s) {
  if (s == "G1") return FormTag::G1;
  if (s == "G2") return FormTag::G2;
  if (s == "G3") return FormTag::G3;
  if (s == "LONG") return FormTag::LONG;
  throw ParseError(0, "unknown form '" + std::string(s) + "'");
}

inline FormTag form_for_characteristic(int p) { return p == 2 ? FormTag::G3 : (p == 3 ? FormTag::G2 : FormTag::G1); }

/// Number of free coefficients in a form.
inline int free_coefficients(FormTag f) {
  switch (f) {
    case FormTag::G1: return 2;
    case FormTag::G2: return 3;
    case FormTag::G3: return 4;
    case FormTag::LONG: return 5;
  }
  return 5;
}

/// Indices into (a1, a2, a3, a4, a6) of the free coefficients of a form.
inline std::vector<int> free_indices(FormTag f) {
  switch (f) {
    case FormTag::G1: return {3, 4};
    case FormTag::G2: return {1, 3, 4};
    case FormTag::G3: return {0, 2, 3, 4};
    case FormTag::LONG: return {0, 1, 2, 3, 4};
  }
  return {};
}

inline void check_form_characteristic(FormTag f, int p) {
  bool ok = f == FormTag::LONG || (f == FormTag::G1 && p >= 5) || (f == FormTag::G2 && p == 3) ||
            (f == FormTag::G3 && p == 2);
  if (!ok) fail(ErrorKind::MismatchedCharacteristic, form_name(f) + " does not match characteristic " + std::to_string(p));
}

struct ReducedForm {
  FormTag form;
  WeierstrassCurve curve;
};

/// The characteristic's reduction map: short form for p >= 5, a1 = a3 = 0 for
/// p = 3 and a2 = 0 for p = 2.  All divisions are by unit constants.
inline ReducedForm reduce_form(const WeierstrassCurve& E) {
  using detail::times_int;
  const FiniteField* F = E.f();
  int p = F->p();
  auto c = [&](long long v) { return F->from_int(v); };
  PadicElem zero = PadicElem::zero(F);
  if (p >= 5) {
    CurveInvariants inv = invariants(E);
    const auto &b2 = inv.b2, &b4 = inv.b4, &b6 = inv.b6;
    PadicElem b2sq = b2 * b2;
    PadicElem a4 = padic_unit_div(b4, c(2)) - padic_unit_div(b2sq, c(48));
    PadicElem a6 = padic_unit_div(b6, c(4)) + padic_unit_div(b2sq * b2, c(864)) - padic_unit_div(b2 * b4, c(24));
    return {FormTag::G1, {E.field(), zero, zero, zero, a4, a6}};
  }
  if (p == 3) {
    CurveInvariants inv = invariants(E);
    return {FormTag::G2,
            {E.field(), zero, padic_unit_div(inv.b2, c(4)), zero, padic_unit_div(inv.b4, c(2)),
             padic_unit_div(inv.b6, c(4))}};
  }
  const auto &a1 = E.a1(), &a2 = E.a2(), &a3 = E.a3(), &a4 = E.a4(), &a6 = E.a6();
  PadicElem n3 = a3 - padic_unit_div(a1 * a2, c(3));
  PadicElem n4 = a4 - padic_unit_div(a2 * a2, c(3));
  PadicElem n6 = padic_unit_div(times_int(a2 * a2 * a2, 2), c(27)) - padic_unit_div(a2 * a4, c(3)) + a6;
  return {FormTag::G3, {E.field(), a1, zero, n3, n4, n6}};
}

inline bool is_in_form(const WeierstrassCurve& E, FormTag f) {
  switch (f) {
    case FormTag::G1: return E.a1().is_exact_zero() && E.a2().is_exact_zero() && E.a3().is_exact_zero();
    case FormTag::G2: return E.a1().is_exact_zero() && E.a3().is_exact_zero();
    case FormTag::G3: return E.a2().is_exact_zero();
    case FormTag::LONG: return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Tate's algorithm.
// ---------------------------------------------------------------------------
namespace detail {

enum class Tri : std::uint8_t { False, True, Unknown };

/// Is v(x) < k?
inline Tri val_below(const PadicElem& x, int k) {
  Valuation v = x.val();
  switch (v.kind) {
    case Valuation::Exact: return v.v < k ? Tri::True : Tri::False;
    case Valuation::Infinite: return Tri::False;
    case Valuation::AtLeast: return v.v >= k ? Tri::False : Tri::Unknown;
  }
  return Tri::Unknown;
}

class TateRunner {
 public:
  TateRunner(const WeierstrassCurve& E, const TateOptions& opt)
      : F_(*E.f()), p_(F_.p()), a_(E.coeffs()), exact_(E.exact()), opt_(opt) {}

  TateOutcome run() {
    for (int iter = 0;; ++iter) {
      if (iter > opt_.iteration_cap) fail(ErrorKind::IterationBudget, "iteration cap exceeded");
      iterations_ = iter;

      // Step 1.  The residue of Δ comes straight from the coefficient residues.
      std::array<Code, 5> r;
      for (int i = 0; i < 5; ++i) {
        auto d = a_[i].known_digit(0);
        if (!d) return undecided("coefficient residues unknown");
        r[i] = *d;
      }
      if (delta_residue(r) != 0) return decided(KodairaType::make(KodairaType::I0), 1, 0);

      Valuation vdelta = invariants_of_current().delta.val();
      if (vdelta.kind == Valuation::Infinite) fail(ErrorKind::SingularCurve, "discriminant is zero");
      current_vdelta_ = vdelta;

      // Step 2.  Move the singular point of the reduction to (0, 0).
      {
        auto rt = singular_point(r);
        translate(PadicElem::constant(&F_, rt.first), zero(), PadicElem::constant(&F_, rt.second));
      }
      for (int i : {2, 3, 4}) {
        auto d = a_[i].known_digit(0);
        if (!d) return undecided("residue after singular-point shift unknown");
        if (*d != 0) throw std::logic_error("singular point not moved to the origin");
      }
      auto res1 = a_[0].known_digit(0), res2 = a_[1].known_digit(0);
      if (!res1 || !res2) return undecided("residues of a1, a2 unknown");
      Code b2res = F_.add(F_.mul(*res1, *res1), F_.mul(F_.from_int(4), *res2));
      if (b2res != 0) {
        if (vdelta.kind != Valuation::Exact) return undecided("multiplicative: v(delta) not pinned down");
        int N = vdelta.v;
        bool split = F_.quadratic_has_root(*res1, F_.neg(*res2));
        int c = split ? N : (N % 2 == 0 ? 2 : 1);
        return decided(KodairaType::make(KodairaType::In, N), c, N);
      }

      // Step 3.
      switch (val_below(a_[4], 2)) {
        case Tri::True: return decided_vd(KodairaType::make(KodairaType::II), 1);
        case Tri::Unknown: return undecided("step 3: v(a6)");
        case Tri::False: break;
      }

      // Step 4.
      {
        const auto &a1 = a_[0], &a2 = a_[1], &a3 = a_[2], &a4 = a_[3], &a6 = a_[4];
        PadicElem b8 = a1 * a1 * a6 + times_int(a2 * a6, 4) - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        switch (val_below(b8, 3)) {
          case Tri::True: return decided_vd(KodairaType::make(KodairaType::III), 2);
          case Tri::Unknown: return undecided("step 4: v(b8)");
          case Tri::False: break;
        }
      }

      // Step 5.
      {
        PadicElem b6 = a_[2] * a_[2] + times_int(a_[4], 4);
        switch (val_below(b6, 3)) {
          case Tri::True: {
            auto y1 = digit_above_zeros(a_[2], 1), y2 = digit_above_zeros(a_[4], 2);
            if (!y1 || !y2) return undecided("step 5: quadratic coefficients");
            int c = F_.quadratic_has_root(*y1, F_.neg(*y2)) ? 3 : 1;
            return decided_vd(KodairaType::make(KodairaType::IV), c);
          }
          case Tri::Unknown: return undecided("step 5: v(b6)");
          case Tri::False: break;
        }
      }

      // Step 6.  Arrange π | a1, a2; π^2 | a3, a4; π^3 | a6.
      {
        Code s, t;
        if (p_ == 2) {
          auto d2 = a_[1].known_digit(0);
          auto d6 = digit_above_zeros(a_[4], 2);
          if (!d2 || !d6) return undecided("step 6: residues");
          s = F_.frobenius_inverse(*d2);
          t = F_.frobenius_inverse(*d6);
        } else {
          auto d1 = a_[0].known_digit(0);
          auto d3 = digit_above_zeros(a_[2], 1);
          if (!d1 || !d3) return undecided("step 6: residues");
          if (p_ == 3) {
            s = *d1;
            t = *d3;
          } else {
            Code half = F_.inv(F_.from_int(2));
            s = F_.neg(F_.mul(*d1, half));
            t = F_.neg(F_.mul(*d3, half));
          }
        }
        translate(zero(), PadicElem::constant(&F_, s), PadicElem::monomial(&F_, t, 1));
      }
      std::optional<Code> cb = digit_above_zeros(a_[1], 1), cc = digit_above_zeros(a_[3], 2),
                          cd = digit_above_zeros(a_[4], 3);
      if (!cb || !cc || !cd) return undecided("step 6: cubic coefficients");
      for (auto [i, k] : {std::pair{0, 1}, std::pair{2, 2}})
        if (!require_zeros(a_[i], k)) return undecided("step 6: divisibility");
      CubicStructure cubic = cubic_structure(F_, *cb, *cc, *cd);
      if (cubic.kind == CubicStructure::Distinct3)
        return decided_vd(KodairaType::make(KodairaType::I0star), 1 + cubic.roots_in_field);

      translate(PadicElem::monomial(&F_, cubic.repeated, 1), zero(), zero());

      if (cubic.kind == CubicStructure::DoubleSimple) return subprocedure();

      // Steps 8 to 10: triple root.
      {
        auto a3t = digit_above_zeros(a_[2], 2), a6t = digit_above_zeros(a_[4], 4);
        if (!a3t || !a6t) return undecided("step 8: quadratic coefficients");
        Code disc = F_.add(F_.mul(*a3t, *a3t), F_.mul(F_.from_int(4), *a6t));
        if (disc != 0) {
          int c = F_.quadratic_has_root(*a3t, F_.neg(*a6t)) ? 3 : 1;
          return decided_vd(KodairaType::make(KodairaType::IVstar), c);
        }
        Code t = p_ == 2 ? F_.frobenius_inverse(*a6t) : F_.neg(F_.mul(*a3t, F_.inv(F_.from_int(2))));
        translate(zero(), zero(), PadicElem::monomial(&F_, t, 2));
      }
      switch (val_below(a_[3], 4)) {
        case Tri::True: return decided_vd(KodairaType::make(KodairaType::IIIstar), 2);
        case Tri::Unknown: return undecided("step 9: v(a4)");
        case Tri::False: break;
      }
      switch (val_below(a_[4], 6)) {
        case Tri::True: return decided_vd(KodairaType::make(KodairaType::IIstar), 1);
        case Tri::Unknown: return undecided("step 10: v(a6)");
        case Tri::False: break;
      }

      // Step 11: not minimal.  Rescale and start over.
      static constexpr int kWeights[5] = {1, 2, 3, 4, 6};
      for (int i = 0; i < 5; ++i) {
        Tri below = val_below(a_[i], kWeights[i]);
        if (below == Tri::Unknown) return undecided("step 11: rescaling");
        if (below == Tri::True) throw std::logic_error("non-minimal model with a small coefficient");
        a_[i] = padic_shift(a_[i], -kWeights[i]);
      }
    }
  }

 private:
  PadicElem zero() const { return PadicElem::zero(&F_); }
  static PadicElem times_int(const PadicElem& x, long long k) { return detail::times_int(x, k); }

  TateOutcome undecided(const char* reason) const { return Undecided{reason, 1}; }

  TateOutcome decided(KodairaType k, int c, std::optional<int> vmin) const {
    return Decided{k, c, iterations_, vmin};
  }
  TateOutcome decided_vd(KodairaType k, int c) const {
    std::optional<int> vmin;
    if (current_vdelta_.kind == Valuation::Exact) vmin = current_vdelta_.v;
    return Decided{k, c, iterations_, vmin};
  }

  CurveInvariants invariants_of_current() const { return invariants(a_); }

  Code delta_residue(const std::array<Code, 5>& r) const {
    const FiniteField& F = F_;
    auto k = [&](long long v) { return F.from_int(v); };
    Code a1 = r[0], a2 = r[1], a3 = r[2], a4 = r[3], a6 = r[4];
    Code b2 = F.add(F.mul(a1, a1), F.mul(k(4), a2));
    Code b4 = F.add(F.mul(a1, a3), F.mul(k(2), a4));
    Code b6 = F.add(F.mul(a3, a3), F.mul(k(4), a6));
    Code b8 = F.sub(F.add(F.add(F.mul(F.mul(a1, a1), a6), F.mul(k(4), F.mul(a2, a6))), F.mul(a2, F.mul(a3, a3))),
                    F.add(F.mul(a1, F.mul(a3, a4)), F.mul(a4, a4)));
    Code d = F.neg(F.mul(F.mul(b2, b2), b8));
    d = F.sub(d, F.mul(k(8), F.mul(b4, F.mul(b4, b4))));
    d = F.sub(d, F.mul(k(27), F.mul(b6, b6)));
    d = F.add(d, F.mul(k(9), F.mul(b2, F.mul(b4, b6))));
    return d;
  }

  /// Residues (r, t) locating the singular point of the reduction.
  std::pair<Code, Code> singular_point(const std::array<Code, 5>& res) const {
    const FiniteField& F = F_;
    auto k = [&](long long v) { return F.from_int(v); };
    Code a1 = res[0], a2 = res[1], a3 = res[2], a4 = res[3], a6 = res[4];
    Code b2 = F.add(F.mul(a1, a1), F.mul(k(4), a2));
    Code b4 = F.add(F.mul(a1, a3), F.mul(k(2), a4));
    Code b6 = F.add(F.mul(a3, a3), F.mul(k(4), a6));
    if (p_ == 2) {
      if (b2 == 0) {
        Code r = F.frobenius_inverse(a4);
        Code v = F.add(F.mul(F.add(F.mul(F.add(r, a2), r), a4), r), a6);
        return {r, F.frobenius_inverse(v)};
      }
      Code a1inv = F.inv(a1);
      Code r = F.mul(a1inv, a3);
      return {r, F.mul(a1inv, F.add(a4, F.mul(r, r)))};
    }
    Code r;
    if (p_ == 3) {
      r = b2 == 0 ? F.frobenius_inverse(F.neg(b6)) : F.neg(F.div(b4, b2));
      return {r, F.add(F.mul(a1, r), a3)};
    }
    Code c4 = F.sub(F.mul(b2, b2), F.mul(k(24), b4));
    Code c6 = F.sub(F.add(F.neg(F.mul(b2, F.mul(b2, b2))), F.mul(k(36), F.mul(b2, b4))), F.mul(k(216), b6));
    if (c4 == 0)
      r = F.neg(F.div(b2, k(12)));
    else
      r = F.neg(F.div(F.add(c6, F.mul(b2, c4)), F.mul(k(12), c4)));
    Code t = F.neg(F.div(F.add(F.mul(a1, r), a3), k(2)));
    return {r, t};
  }

  void translate(const PadicElem& r, const PadicElem& s, const PadicElem& t) {
    a_ = detail::translated_numerators(a_, r, s, t);
  }

  /// Whether digits below k are known and zero; a known nonzero digit there is
  /// a broken invariant of the algorithm.
  bool require_zeros(const PadicElem& x, int k) const {
    for (int i = 0; i < k; ++i) {
      auto d = x.known_digit(i);
      if (!d) return false;
      if (*d != 0) throw std::logic_error("expected divisibility failed inside Tate's algorithm");
    }
    return true;
  }
  /// Digit k of x, which must be divisible by π^k.
  std::optional<Code> digit_above_zeros(const PadicElem& x, int k) const {
    if (!require_zeros(x, k)) return std::nullopt;
    return x.known_digit(k);
  }

  TateOutcome subprocedure() {
    const FiniteField& F = F_;
    Code two = F.from_int(2), four = F.from_int(4);
    auto a2t_opt = digit_above_zeros(a_[1], 1);
    if (!a2t_opt) return undecided("step 7: a2/p");
    Code a2t = *a2t_opt;
    int ix = 3, iy = 3;
    for (;;) {
      int n_now = ix + iy - 5;
      if (current_vdelta_.kind == Valuation::Exact && n_now > current_vdelta_.v - 5)
        throw std::logic_error("step 7 subprocedure exceeded its v(delta) bound");
      auto a3t = digit_above_zeros(a_[2], iy - 1);
      auto a4t = digit_above_zeros(a_[3], ix);
      auto a6t = digit_above_zeros(a_[4], ix + iy - 2);
      if (!a3t || !a4t || !a6t) return undecided("step 7: y-quadratic");
      if (F.add(F.mul(*a3t, *a3t), F.mul(four, *a6t)) != 0) {
        int c = F.quadratic_has_root(*a3t, F.neg(*a6t)) ? 4 : 2;
        return decided_vd(KodairaType::make(KodairaType::Instar, ix + iy - 5), c);
      }
      Code t = p_ == 2 ? F.frobenius_inverse(*a6t) : F.neg(F.div(*a3t, two));
      translate(zero(), zero(), PadicElem::monomial(&F, t, iy - 1));
      ++iy;
      a3t = digit_above_zeros(a_[2], iy - 1);
      a4t = digit_above_zeros(a_[3], ix);
      a6t = digit_above_zeros(a_[4], ix + iy - 2);
      if (!a3t || !a4t || !a6t) return undecided("step 7: x-quadratic");
      if (F.sub(F.mul(*a4t, *a4t), F.mul(four, F.mul(*a6t, a2t))) != 0) {
        Code a2inv = F.inv(a2t);
        int c = F.quadratic_has_root(F.mul(*a4t, a2inv), F.mul(*a6t, a2inv)) ? 4 : 2;
        return decided_vd(KodairaType::make(KodairaType::Instar, ix + iy - 5), c);
      }
      Code r = p_ == 2 ? F.frobenius_inverse(F.div(*a6t, a2t)) : F.neg(F.div(*a4t, F.mul(two, a2t)));
      translate(PadicElem::monomial(&F, r, ix - 1), zero(), zero());
      ++ix;
    }
  }

  const FiniteField& F_;
  int p_;
  std::array<PadicElem, 5> a_;
  bool exact_;
  TateOptions opt_;
  int iterations_ = 0;
  Valuation current_vdelta_ = Valuation::at_least(0);
};

}  // namespace detail

/// Tate's algorithm over F_Q((π)).  Exact curves always decide (or throw);
/// residue classes return Undecided at the first test their known digits
/// cannot settle.
inline TateOutcome run_tate(const WeierstrassCurve& E, const TateOptions& opt = {}) {
  return detail::TateRunner(E, opt).run();
}

inline std::string to_string(const TateOutcome& o) {
  if (auto d = std::get_if<Decided>(&o)) {
    std::string s = d->kodaira.str() + " c=" + std::to_string(d->tamagawa) + " iterations=" +
                    std::to_string(d->iterations);
    if (d->v_min_delta) s += " v_min_delta=" + std::to_string(*d->v_min_delta);
    return s;
  }
  return std::string("Undecided(") + std::get<Undecided>(o).blocking_reason + ")";
}

// ---------------------------------------------------------------------------
// Brute-force minimality oracle.
// ---------------------------------------------------------------------------
struct MinimalityWitness {
  PadicElem l, m, n;
};

struct SearchOptions {
  long long budget = 50'000'000;  // search-tree nodes (or candidates in naive mode)
  bool naive = false;             // enumerate all Q^{6k} triples instead of the digit tree
};

namespace detail {

/// Checks a_i' in π^{k i} on digits below `limit` (limit = 6k means the full
/// condition).  Coefficients are known at least to `limit` digits.
inline bool witness_digits_ok(const std::array<PadicElem, 5>& num, int k, int limit) {
  static constexpr int kWeights[5] = {1, 2, 3, 4, 6};
  for (int i = 0; i < 5; ++i) {
    int upto = std::min(limit, k * kWeights[i]);
    for (int j = 0; j < upto; ++j) {
      auto d = num[i].known_digit(j);
      if (!d || *d != 0) return false;
    }
  }
  return true;
}

struct MinimalitySearch {
  const FiniteField* F;
  std::array<PadicElem, 5> a;  // truncated to 6k digits
  int k;
  long long budget;
  long long nodes = 0;
  Digits l, m, n;

  bool dfs(int j) {
    if (++nodes > budget) fail(ErrorKind::SearchBudgetExceeded, "minimality search budget exhausted");
    if (j == 3 * k) {
      auto num = translated_numerators(a, PadicElem::exact_digits(F, n), PadicElem::exact_digits(F, l),
                                       PadicElem::exact_digits(F, m));
      return witness_digits_ok(num, k, 6 * k);
    }
    int q = F->q();
    bool vl = j < k, vn = j < 2 * k, vm = j < 3 * k;
    int cl = vl ? q : 1, cn = vn ? q : 1, cm = vm ? q : 1;
    for (int x = 0; x < cl; ++x)
      for (int y = 0; y < cn; ++y)
        for (int z = 0; z < cm; ++z) {
          if (vl) l[j] = static_cast<Code>(x);
          if (vn) n[j] = static_cast<Code>(y);
          if (vm) m[j] = static_cast<Code>(z);
          auto num = translated_numerators(a, PadicElem::exact_digits(F, n), PadicElem::exact_digits(F, l),
                                           PadicElem::exact_digits(F, m));
          if (witness_digits_ok(num, k, j + 1) && dfs(j + 1)) return true;
        }
    if (vl) l[j] = 0;
    if (vn) n[j] = 0;
    if (vm) m[j] = 0;
    return false;
  }
};

}  // namespace detail

/// Searches l in L_k, n in L_{2k}, m in L_{3k} with a_i' in π^{k i} R_P.  A
/// witness exists iff at least k iterations of Tate's algorithm complete.
inline std::optional<MinimalityWitness> minimality_certificate(const WeierstrassCurve& E, int k,
                                                               const SearchOptions& opt = {}) {
  if (k < 1) fail(ErrorKind::InsufficientValuation, "k must be positive");
  const FiniteField* F = E.f();
  if (E.exact() && discriminant(E).is_exact_zero()) fail(ErrorKind::SingularCurve, "discriminant is zero");
  std::array<PadicElem, 5> a;
  for (int i = 0; i < 5; ++i) a[i] = E.coeffs()[i].truncate(6 * k);
  if (!opt.naive) {
    detail::MinimalitySearch s{F, a, k, opt.budget, 0, Digits(k, 0), Digits(3 * k, 0), Digits(2 * k, 0)};
    if (!s.dfs(0)) return std::nullopt;
    return MinimalityWitness{PadicElem::exact_digits(F, s.l), PadicElem::exact_digits(F, s.m),
                             PadicElem::exact_digits(F, s.n)};
  }
  long double total = 1;
  for (int i = 0; i < 6 * k; ++i) total *= F->q();
  if (total > static_cast<long double>(opt.budget)) fail(ErrorKind::SearchBudgetExceeded, "naive search too large");
  int q = F->q();
  Digits l(k, 0), n(2 * k, 0), m(3 * k, 0);
  // Odometer over the 6k digits (l, n, m).
  std::vector<Code*> slots;
  for (auto& d : l) slots.push_back(&d);
  for (auto& d : n) slots.push_back(&d);
  for (auto& d : m) slots.push_back(&d);
  for (;;) {
    auto num = detail::translated_numerators(a, PadicElem::exact_digits(F, n), PadicElem::exact_digits(F, l),
                                             PadicElem::exact_digits(F, m));
    if (detail::witness_digits_ok(num, k, 6 * k))
      return MinimalityWitness{PadicElem::exact_digits(F, l), PadicElem::exact_digits(F, m),
                               PadicElem::exact_digits(F, n)};
    std::size_t i = 0;
    while (i < slots.size() && ++*slots[i] == q) *slots[i++] = 0;
    if (i == slots.size()) return std::nullopt;
  }
}

/// Largest k <= k_max with a minimality witness (0 if none).
inline int certified_iterations(const WeierstrassCurve& E, int k_max, const SearchOptions& opt = {}) {
  int best = 0;
  for (int k = 1; k <= k_max; ++k) {
    if (!minimality_certificate(E, k, opt)) break;
    best = k;
  }
  return best;
}

struct WitnessReport {
  int p = 0;
  int k = 0;
  /// p = 2: number of pairs (l, m) in L_k x L_{3k}.  p = 3: number of n in L_{2k}.
  long long count = 0;
  /// p = 3 only: number of n in L_k (the other reading of the uniqueness statement).
  std::optional<long long> count_short;
  bool unique() const { return count == 1; }
};

/// Counts the witnesses of the characteristic 2 and 3 uniqueness statements.
inline WitnessReport witness_uniqueness_check(const WeierstrassCurve& E, int k, long long budget = 10'000'000) {
  const FiniteField* F = E.f();
  int p = F->p(), q = F->q();
  WitnessReport rep;
  rep.p = p;
  rep.k = k;
  static constexpr int kWeights[5] = {1, 2, 3, 4, 6};
  auto in_ideals = [&](const std::array<PadicElem, 5>& num) {
    for (int i = 0; i < 5; ++i)
      if (detail::val_below(num[i], k * kWeights[i]) != detail::Tri::False) return false;
    return true;
  };
  auto pow_q = [&](int e) {
    long double t = 1;
    for (int i = 0; i < e; ++i) t *= q;
    if (t > static_cast<long double>(budget)) fail(ErrorKind::SearchBudgetExceeded, "witness enumeration too large");
    return static_cast<long long>(t);
  };
  PadicElem zero = PadicElem::zero(F);
  if (p == 3) {
    if (!is_in_form(E, FormTag::G2)) fail(ErrorKind::NotInReducedForm, "expected y^2 = x^3 + a2 x^2 + a4 x + a6");
    auto count_over = [&](int digits) {
      long long total = pow_q(digits), hits = 0;
      Digits n(digits, 0);
      for (long long idx = 0; idx < total; ++idx) {
        long long v = idx;
        for (int i = 0; i < digits; ++i, v /= q) n[i] = static_cast<Code>(v % q);
        auto num = detail::translated_numerators(E.coeffs(), PadicElem::exact_digits(F, n), zero, zero);
        if (in_ideals(num)) ++hits;
      }
      return hits;
    };
    rep.count = count_over(2 * k);
    rep.count_short = count_over(k);
    return rep;
  }
  if (p == 2) {
    if (!is_in_form(E, FormTag::G3)) fail(ErrorKind::NotInReducedForm, "expected a2 = 0");
    long long total = pow_q(4 * k);
    Digits l(k, 0), m(3 * k, 0);
    for (long long idx = 0; idx < total; ++idx) {
      long long v = idx;
      for (int i = 0; i < k; ++i, v /= q) l[i] = static_cast<Code>(v % q);
      for (int i = 0; i < 3 * k; ++i, v /= q) m[i] = static_cast<Code>(v % q);
      PadicElem L = PadicElem::exact_digits(F, l), M = PadicElem::exact_digits(F, m);
      PadicElem N = L * L + E.a1() * L;
      if (in_ideals(detail::translated_numerators(E.coeffs(), N, L, M))) ++rep.count;
    }
    return rep;
  }
  fail(ErrorKind::NotInReducedForm, "uniqueness statements exist only for p = 2 and p = 3");
}

}  // namespace kodaira
