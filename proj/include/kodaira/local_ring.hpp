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

#include <algorithm>
#include <boost/container/small_vector.hpp>
#include <climits>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "kodaira/detail/expr_parser.hpp"
#include "kodaira/error.hpp"
#include "kodaira/residue_field.hpp"

namespace kodaira {

/// Precision of an exact element.  Large enough to dominate any real
/// precision and small enough that sums of two never overflow.
inline constexpr int kInfinitePrecision = INT_MAX / 4;

using Digits = boost::container::small_vector<Code, 16>;

struct Valuation {
  enum Kind { Exact, AtLeast, Infinite };
  Kind kind = Infinite;
  int v = 0;

  static Valuation exact(int v) { return {Exact, v}; }
  static Valuation at_least(int m) { return {AtLeast, m}; }
  static Valuation infinite() { return {Infinite, kInfinitePrecision}; }

  /// The largest n with v >= n proven.
  int lower_bound() const { return kind == Infinite ? kInfinitePrecision : v; }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.kind == b.kind && (a.kind == Infinite || a.v == b.v);
  }
};

/// An element of F_Q[[π]] (exact) or the residue class prefix + π^M R (inexact).
/// Exact elements keep no trailing zero digits, so equality is structural.
class PadicElem {
 public:
  PadicElem() = default;
  explicit PadicElem(const FiniteField* f) : field_(f) {}

  static PadicElem zero(const FiniteField* f) { return PadicElem(f); }
  static PadicElem constant(const FiniteField* f, Code c) {
    PadicElem r(f);
    if (c != 0) r.digits_.push_back(c);
    return r;
  }
  static PadicElem from_int(const FiniteField* f, long long v) { return constant(f, f->from_int(v)); }
  /// c·π^e, exact.
  static PadicElem monomial(const FiniteField* f, Code c, int e) {
    PadicElem r(f);
    if (c != 0) {
      r.digits_.assign(e, 0);
      r.digits_.push_back(c);
    }
    return r;
  }
  template <class Range>
  static PadicElem exact_digits(const FiniteField* f, const Range& digits) {
    PadicElem r(f);
    r.digits_.assign(std::begin(digits), std::end(digits));
    r.trim();
    return r;
  }
  /// The class of all elements congruent to `digits` mod π^{size}.
  template <class Range>
  static PadicElem class_of(const FiniteField* f, const Range& digits) {
    PadicElem r(f);
    r.digits_.assign(std::begin(digits), std::end(digits));
    r.exact_ = false;
    return r;
  }
  static PadicElem class_of(const FiniteField* f, const Code* digits, int precision) {
    PadicElem r(f);
    r.digits_.assign(digits, digits + precision);
    r.exact_ = false;
    return r;
  }

  const FiniteField* field() const { return field_; }
  bool exact() const { return exact_; }
  int precision() const { return exact_ ? kInfinitePrecision : static_cast<int>(digits_.size()); }
  const Digits& digits() const { return digits_; }
  int length() const { return static_cast<int>(digits_.size()); }
  bool is_exact_zero() const { return exact_ && digits_.empty(); }

  /// Digit i; zero past the end of an exact element.
  std::optional<Code> known_digit(int i) const {
    if (i < static_cast<int>(digits_.size())) return digits_[i];
    if (exact_) return Code{0};
    return std::nullopt;
  }
  Code digit(int i) const {
    auto d = known_digit(i);
    if (!d) fail(ErrorKind::InsufficientPrecision, "digit " + std::to_string(i) + " is not known");
    return *d;
  }

  Valuation val() const {
    for (std::size_t i = 0; i < digits_.size(); ++i)
      if (digits_[i] != 0) return Valuation::exact(static_cast<int>(i));
    return exact_ ? Valuation::infinite() : Valuation::at_least(static_cast<int>(digits_.size()));
  }
  /// Valuation lower bound.
  int vlb() const { return val().lower_bound(); }

  /// Forget everything from digit m on (no-op if already coarser).
  PadicElem truncate(int m) const {
    if (m >= precision()) return *this;
    PadicElem r(field_);
    r.exact_ = false;
    r.digits_.assign(digits_.begin(), digits_.begin() + std::min<int>(m, length()));
    r.digits_.resize(m, 0);
    return r;
  }

  friend bool operator==(const PadicElem& a, const PadicElem& b) {
    return a.exact_ == b.exact_ && a.digits_ == b.digits_ &&
           (a.field_ == b.field_ || (a.field_ && b.field_ && a.field_->same_as(*b.field_)));
  }

  std::string str(std::string_view uniformizer = "p") const;

  // Raw access for arithmetic kernels.
  Digits& mutable_digits() { return digits_; }
  void set_exact(bool e) { exact_ = e; }
  void trim() {
    if (exact_)
      while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
  }

 private:
  const FiniteField* field_ = nullptr;
  Digits digits_;
  bool exact_ = true;
};

namespace detail {

inline const FiniteField& same_field(const PadicElem& a, const PadicElem& b) {
  if (a.field() == b.field()) return *a.field();
  if (!a.field() || !b.field() || !a.field()->same_as(*b.field()))
    fail(ErrorKind::MixedFields, "operands live over different residue fields");
  return *a.field();
}

}  // namespace detail

inline PadicElem padic_add(const PadicElem& a, const PadicElem& b) {
  const FiniteField& F = detail::same_field(a, b);
  PadicElem r(&F);
  int prec = std::min(a.precision(), b.precision());
  int len = std::min(prec, std::max(a.length(), b.length()));
  if (prec != kInfinitePrecision) {
    len = prec;
    r.set_exact(false);
  }
  auto& d = r.mutable_digits();
  d.resize(len);
  const auto& x = a.digits();
  const auto& y = b.digits();
  for (int i = 0; i < len; ++i)
    d[i] = F.add(i < a.length() ? x[i] : 0, i < b.length() ? y[i] : 0);
  r.trim();
  return r;
}

inline PadicElem padic_neg(const PadicElem& a) {
  PadicElem r = a;
  for (auto& c : r.mutable_digits()) c = a.field()->neg(c);
  return r;
}

inline PadicElem padic_sub(const PadicElem& a, const PadicElem& b) {
  const FiniteField& F = detail::same_field(a, b);
  PadicElem r(&F);
  int prec = std::min(a.precision(), b.precision());
  int len = std::min(prec, std::max(a.length(), b.length()));
  if (prec != kInfinitePrecision) {
    len = prec;
    r.set_exact(false);
  }
  auto& d = r.mutable_digits();
  d.resize(len);
  const auto& x = a.digits();
  const auto& y = b.digits();
  for (int i = 0; i < len; ++i)
    d[i] = F.sub(i < a.length() ? x[i] : 0, i < b.length() ? y[i] : 0);
  r.trim();
  return r;
}

/// Product with the precision min(M_a + vlb(b), M_b + vlb(a)).
inline PadicElem padic_mul(const PadicElem& a, const PadicElem& b) {
  const FiniteField& F = detail::same_field(a, b);
  if (a.is_exact_zero() || b.is_exact_zero()) return PadicElem::zero(&F);
  PadicElem r(&F);
  int la = a.length(), lb = b.length();
  int prec = kInfinitePrecision;
  if (!a.exact()) prec = std::min(prec, a.precision() + b.vlb());
  if (!b.exact()) prec = std::min(prec, b.precision() + a.vlb());
  int len = la + lb - 1;
  if (prec != kInfinitePrecision) {
    len = prec;
    r.set_exact(false);
  }
  if (len <= 0) {
    r.mutable_digits().clear();
    return r;
  }
  auto& d = r.mutable_digits();
  d.assign(len, 0);
  const auto& x = a.digits();
  const auto& y = b.digits();
  for (int i = 0; i < la && i < len; ++i) {
    Code xi = x[i];
    if (xi == 0) continue;
    int jmax = std::min(lb, len - i);
    for (int j = 0; j < jmax; ++j) d[i + j] = F.add(d[i + j], F.mul(xi, y[j]));
  }
  r.trim();
  return r;
}

/// Multiplies by π^k.  Division (k < 0) requires a proven valuation >= -k.
inline PadicElem padic_shift(const PadicElem& a, int k) {
  if (k == 0 || a.is_exact_zero()) return a;
  PadicElem r = a;
  auto& d = r.mutable_digits();
  if (k > 0) {
    d.insert(d.begin(), k, Code{0});
    return r;
  }
  if (a.vlb() < -k)
    fail(ErrorKind::InsufficientValuation, "cannot divide by p^" + std::to_string(-k));
  d.erase(d.begin(), d.begin() + std::min<int>(-k, static_cast<int>(d.size())));
  return r;
}

/// Digitwise multiplication by a constant of F_Q.
inline PadicElem padic_scale(const PadicElem& a, Code c) {
  if (c == 0) return PadicElem::zero(a.field());
  if (c == 1) return a;
  PadicElem r = a;
  for (auto& x : r.mutable_digits()) x = a.field()->mul(x, c);
  return r;
}

inline PadicElem padic_unit_div(const PadicElem& a, Code c) {
  if (c == 0) fail(ErrorKind::DivisionByZero, "division by the zero constant");
  return padic_scale(a, a.field()->inv(c));
}

inline PadicElem padic_unit_div(const PadicElem& a, const FieldElem& c) {
  return padic_unit_div(a, c.code);
}

/// Inverse of a unit, to at most `precision` digits (exact if a is a nonzero
/// constant).
inline PadicElem padic_unit_inverse(const PadicElem& a, int precision) {
  const FiniteField& F = *a.field();
  auto d0 = a.known_digit(0);
  if (!d0 || *d0 == 0) fail(ErrorKind::DivisionByZero, "inverse of a non-unit");
  if (a.exact() && a.length() == 1) return PadicElem::constant(&F, F.inv(*d0));
  int prec = std::min(precision, a.precision());
  Digits inv(prec, 0);
  Code i0 = F.inv(*d0);
  if (prec > 0) inv[0] = i0;
  for (int j = 1; j < prec; ++j) {
    Code acc = 0;
    for (int i = 1; i <= j && i < a.length(); ++i) acc = F.add(acc, F.mul(a.digits()[i], inv[j - i]));
    inv[j] = F.neg(F.mul(i0, acc));
  }
  return PadicElem::class_of(&F, inv);
}

enum class PadicOp { Add, Sub, Mul };

inline PadicElem padic_arith(PadicOp op, const PadicElem& a, const PadicElem& b) {
  switch (op) {
    case PadicOp::Add: return padic_add(a, b);
    case PadicOp::Sub: return padic_sub(a, b);
    case PadicOp::Mul: return padic_mul(a, b);
  }
  return {};
}

inline Valuation padic_val(const PadicElem& a) { return a.val(); }

inline PadicElem operator+(const PadicElem& a, const PadicElem& b) { return padic_add(a, b); }
inline PadicElem operator-(const PadicElem& a, const PadicElem& b) { return padic_sub(a, b); }
inline PadicElem operator*(const PadicElem& a, const PadicElem& b) { return padic_mul(a, b); }
inline PadicElem operator-(const PadicElem& a) { return padic_neg(a); }

// ---------------------------------------------------------------------------
// Text form: sum of C*p^K terms, optional O(p^M).
// ---------------------------------------------------------------------------
inline std::string PadicElem::str(std::string_view uniformizer) const {
  std::string out;
  for (int i = 0; i < length(); ++i) {
    Code c = digits_[i];
    if (c == 0) continue;
    std::string coef = field_->format(c);
    if (coef.find('+') != std::string::npos || coef.find('*') != std::string::npos) coef = "(" + coef + ")";
    std::string mono = i == 1 ? std::string(uniformizer) : std::string(uniformizer) + "^" + std::to_string(i);
    std::string term = i == 0 ? coef : (c == 1 ? mono : coef + "*" + mono);
    if (!out.empty()) out += " + ";
    out += term;
  }
  if (!exact_) {
    if (!out.empty()) out += " + ";
    out += "O(" + std::string(uniformizer) + "^" + std::to_string(length()) + ")";
  }
  return out.empty() ? "0" : out;
}

namespace detail {

/// Sparse Laurent polynomial in the uniformizer with an optional O(p^M) bound.
struct LaurentValue {
  std::map<int, Code> terms;
  std::optional<int> big_o;

  int vlb() const {
    for (auto [e, c] : terms)
      if (c != 0) return e;
    return big_o ? *big_o : kInfinitePrecision;
  }
  void normalize() {
    for (auto it = terms.begin(); it != terms.end();) {
      if (it->second == 0 || (big_o && it->first >= *big_o))
        it = terms.erase(it);
      else
        ++it;
    }
  }
};

struct LocalAlgebra {
  using Value = LaurentValue;
  const FiniteField& F;
  std::string_view uniformizer = "p";

  Value integer(long long v, std::size_t) {
    Value r;
    r.terms[0] = F.from_int(v);
    r.normalize();
    return r;
  }
  Value name(std::string_view id, std::size_t pos) {
    Value r;
    if (id == uniformizer) {
      r.terms[1] = 1;
      return r;
    }
    FieldAlgebra fa{F};
    r.terms[0] = fa.name(id, pos);
    return r;
  }
  Value call(std::string_view id, Value arg, std::size_t pos) {
    if (id != "O") throw ParseError(pos, "unknown function '" + std::string(id) + "'");
    if (arg.big_o || arg.terms.size() != 1 || arg.terms.begin()->second != 1)
      throw ParseError(pos, "O() takes a power of the uniformizer");
    Value r;
    r.big_o = arg.terms.begin()->first;
    return r;
  }
  Value add(Value a, Value b, std::size_t) {
    for (auto [e, c] : b.terms) a.terms[e] = F.add(a.terms[e], c);
    if (b.big_o) a.big_o = a.big_o ? std::min(*a.big_o, *b.big_o) : *b.big_o;
    a.normalize();
    return a;
  }
  Value neg(Value a, std::size_t) {
    for (auto& [e, c] : a.terms) c = F.neg(c);
    return a;
  }
  Value sub(Value a, Value b, std::size_t pos) { return add(std::move(a), neg(std::move(b), pos), pos); }
  Value mul(Value a, Value b, std::size_t) {
    Value r;
    for (auto [e1, c1] : a.terms)
      for (auto [e2, c2] : b.terms) r.terms[e1 + e2] = F.add(r.terms[e1 + e2], F.mul(c1, c2));
    std::optional<int> o;
    if (a.big_o) o = *a.big_o + std::min(b.vlb(), kInfinitePrecision / 2);
    if (b.big_o) o = o ? std::min(*o, *b.big_o + a.vlb()) : *b.big_o + std::min(a.vlb(), kInfinitePrecision / 2);
    r.big_o = o;
    r.normalize();
    return r;
  }
  Value pow(Value a, long long e, std::size_t pos) {
    if (e < 0) {
      if (a.big_o || a.terms.size() != 1) throw ParseError(pos, "negative power of a non-monomial");
      auto [k, c] = *a.terms.begin();
      Value r;
      r.terms[static_cast<int>(k * e)] = F.pow(c, e);
      return r;
    }
    Value r = integer(1, pos);
    for (long long i = 0; i < e; ++i) r = mul(std::move(r), a, pos);
    return r;
  }
};

inline PadicElem to_padic(const FiniteField& F, const LaurentValue& v) {
  for (auto [e, c] : v.terms)
    if (e < 0 && c != 0) fail(ErrorKind::NotIntegral, "negative power of the uniformizer");
  if (v.big_o && *v.big_o < 0) fail(ErrorKind::NotIntegral, "negative precision bound");
  int top = 0;
  for (auto [e, c] : v.terms) top = std::max(top, e + 1);
  Digits d(v.big_o ? *v.big_o : top, 0);
  for (auto [e, c] : v.terms) d[e] = c;
  return v.big_o ? PadicElem::class_of(&F, d) : PadicElem::exact_digits(&F, d);
}

}  // namespace detail

/// Parses "(g+1)*p^2 + p^3" or "1 + p + O(p^4)".
inline PadicElem parse_padic(const Field& F, std::string_view text, std::string_view uniformizer = "p") {
  detail::LocalAlgebra alg{*F, uniformizer};
  return detail::to_padic(*F, detail::parse_expression(text, alg));
}

}  // namespace kodaira
