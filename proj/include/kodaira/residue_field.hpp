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
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kodaira/detail/expr_parser.hpp"
#include "kodaira/error.hpp"

namespace kodaira {

/// Elements of F_Q are stored as a single code.  The code of
/// c_0 + c_1 g + ... + c_{d-1} g^{d-1} (c_i in the base field) is
/// sum c_i * |base|^i, so the base field embeds as codes below |base| and the
/// prime field as codes below p.
using Code = std::uint16_t;

inline constexpr int kMaxFieldSize = 1024;
inline constexpr int kDefaultSearchCap = 256;

class FiniteField;
using Field = std::shared_ptr<const FiniteField>;

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Dense polynomials over a field, coefficients low to high.  These helpers are
// used for irreducibility checks, root finding and F_q[t] arithmetic.
// ---------------------------------------------------------------------------
using CodePoly = std::vector<Code>;

namespace poly {

inline void trim(CodePoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
inline int degree(const CodePoly& f) { return static_cast<int>(f.size()) - 1; }

CodePoly add(const FiniteField& F, const CodePoly& a, const CodePoly& b);
CodePoly sub(const FiniteField& F, const CodePoly& a, const CodePoly& b);
CodePoly mul(const FiniteField& F, const CodePoly& a, const CodePoly& b);
/// Quotient and remainder; b must be nonzero.
std::pair<CodePoly, CodePoly> divmod(const FiniteField& F, const CodePoly& a, const CodePoly& b);
CodePoly mod(const FiniteField& F, const CodePoly& a, const CodePoly& b);
/// Monic gcd (empty for gcd(0, 0)).
CodePoly gcd(const FiniteField& F, CodePoly a, CodePoly b);
CodePoly powmod(const FiniteField& F, CodePoly base, unsigned long long e, const CodePoly& m);
Code eval(const FiniteField& F, const CodePoly& f, Code x);
/// Irreducibility over F of a monic polynomial: root search for degree <= 3,
/// otherwise gcd(T^{|F|^d} - T, f) = 1 for every d < deg f.
bool is_irreducible(const FiniteField& F, const CodePoly& f);

}  // namespace poly

class FiniteField : public std::enable_shared_from_this<FiniteField> {
 public:
  /// F_p itself.  The symbol is unused for printing but kept for symmetry.
  static Field prime(int p, std::string symbol = "g") {
    if (!is_prime(p)) fail(ErrorKind::InvalidField, std::to_string(p) + " is not prime");
    if (p > kMaxFieldSize) fail(ErrorKind::UnsupportedField, "field size exceeds table limit");
    auto F = std::shared_ptr<FiniteField>(new FiniteField());
    F->p_ = p;
    F->n_ = 1;
    F->q_ = p;
    F->rel_degree_ = 1;
    F->base_q_ = p;
    F->modulus_ = {0, 1};
    F->symbol_ = std::move(symbol);
    F->build_prime_tables();
    F->build_root_tables();
    return F;
  }

  /// F_p[g]/(modulus) with modulus given over F_p, low to high, monic of degree n.
  static Field make(int p, int n, const std::vector<int>& modulus, std::string symbol = "g") {
    Field base = prime(p);
    if (n < 1) fail(ErrorKind::WrongDegree, "extension degree must be positive");
    if (static_cast<int>(modulus.size()) != n + 1)
      fail(ErrorKind::WrongDegree, "modulus must have n+1 coefficients");
    CodePoly m;
    for (int c : modulus) m.push_back(static_cast<Code>(((c % p) + p) % p));
    if (n == 1) {
      if (m.back() != 1) fail(ErrorKind::NotMonic, "modulus must be monic");
      auto F = std::const_pointer_cast<FiniteField>(base);
      F->symbol_ = std::move(symbol);
      F->modulus_ = m;
      return F;
    }
    return extension(base, m, std::move(symbol));
  }

  /// base[symbol]/(modulus) with modulus given over the base field.
  static Field extension(const Field& base, CodePoly modulus, std::string symbol = "t") {
    if (!base) fail(ErrorKind::InvalidField, "missing base field");
    int d = poly::degree(modulus);
    if (d < 1) fail(ErrorKind::WrongDegree, "modulus must have positive degree");
    if (modulus.back() != 1) fail(ErrorKind::NotMonic, "modulus must be monic");
    for (Code c : modulus)
      if (c >= base->q()) fail(ErrorKind::InvalidField, "modulus coefficient outside base field");
    long long size = 1;
    for (int i = 0; i < d; ++i) {
      size *= base->q();
      if (size > kMaxFieldSize) fail(ErrorKind::UnsupportedField, "field size exceeds table limit");
    }
    if (!poly::is_irreducible(*base, modulus)) fail(ErrorKind::InvalidField, "modulus is reducible");
    auto F = std::shared_ptr<FiniteField>(new FiniteField());
    F->p_ = base->p();
    F->n_ = base->degree() * d;
    F->q_ = static_cast<int>(size);
    F->rel_degree_ = d;
    F->base_ = base;
    F->base_q_ = base->q();
    F->modulus_ = std::move(modulus);
    F->symbol_ = std::move(symbol);
    F->build_extension_tables();
    F->build_root_tables();
    return F;
  }

  /// Default modulus for the built-in table, over F_p, low to high.
  static std::optional<std::vector<int>> default_modulus(int q) {
    switch (q) {
      case 4: return std::vector<int>{1, 1, 1};
      case 8: return std::vector<int>{1, 1, 0, 1};
      case 16: return std::vector<int>{1, 1, 0, 0, 1};
      case 9: return std::vector<int>{1, 0, 1};
      case 27: return std::vector<int>{1, 2, 0, 1};
      case 25: return std::vector<int>{2, 1, 1};
      default: return std::nullopt;
    }
  }

  /// F_q from the default table (any prime q, or one of 4, 8, 9, 16, 25, 27).
  static Field standard(int q, std::string symbol = "g") {
    if (is_prime(q)) return prime(q, std::move(symbol));
    int r = q, base = 2;
    while (r > 1 && r % base != 0) ++base;
    while (r > 1 && r % base == 0) r /= base;
    if (q < 2 || r != 1) fail(ErrorKind::InvalidField, "Q=" + std::to_string(q) + " is not a prime power");
    auto m = default_modulus(q);
    if (!m) fail(ErrorKind::UnsupportedField, "no default modulus for Q=" + std::to_string(q) + "; pass one explicitly");
    int p = 2;
    while (q % p != 0) ++p;
    return make(p, static_cast<int>(m->size()) - 1, *m, std::move(symbol));
  }

  int p() const { return p_; }
  int characteristic() const { return p_; }
  /// Absolute degree over F_p.
  int degree() const { return n_; }
  int q() const { return q_; }
  int relative_degree() const { return rel_degree_; }
  const Field& base() const { return base_; }
  const CodePoly& modulus() const { return modulus_; }
  const std::string& symbol() const { return symbol_; }

  bool same_as(const FiniteField& o) const {
    if (this == &o) return true;
    if (p_ != o.p_ || q_ != o.q_ || modulus_ != o.modulus_ || rel_degree_ != o.rel_degree_) return false;
    if (!base_ || !o.base_) return !base_ && !o.base_;
    return base_->same_as(*o.base_);
  }

  Code add(Code a, Code b) const { return add_[a * q_ + b]; }
  Code sub(Code a, Code b) const { return add_[a * q_ + neg_[b]]; }
  Code neg(Code a) const { return neg_[a]; }
  Code mul(Code a, Code b) const { return mul_[a * q_ + b]; }
  Code inv(Code a) const {
    if (a == 0) fail(ErrorKind::DivisionByZero, "inverse of zero");
    return inv_[a];
  }
  Code div(Code a, Code b) const { return mul(a, inv(b)); }
  Code pow(Code a, long long e) const {
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    Code r = 1;
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Code from_int(long long v) const { return static_cast<Code>(((v % p_) + p_) % p_); }
  Code one() const { return 1; }
  /// The class of the generator symbol (a root of the modulus).
  Code generator() const {
    if (rel_degree_ == 1) return static_cast<Code>((p_ - modulus_[0]) % p_);
    return static_cast<Code>(base_q_);
  }

  /// Coefficients over F_p, low to high, exactly n entries.
  std::vector<int> coeffs(Code a) const {
    std::vector<int> out(n_);
    for (int i = 0; i < n_; ++i) {
      out[i] = a % p_;
      a = static_cast<Code>(a / p_);
    }
    return out;
  }
  Code from_coeffs(const std::vector<int>& c) const {
    long long code = 0, scale = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (static_cast<int>(i) >= n_ && c[i] % p_ != 0) fail(ErrorKind::WrongDegree, "too many coefficients");
      if (static_cast<int>(i) < n_) code += scale * (((c[i] % p_) + p_) % p_);
      scale *= p_;
    }
    return static_cast<Code>(code);
  }
  /// Coefficients over the immediate base field, low to high.
  CodePoly base_coeffs(Code a) const {
    CodePoly out(rel_degree_);
    for (int i = 0; i < rel_degree_; ++i) {
      out[i] = static_cast<Code>(a % base_q_);
      a = static_cast<Code>(a / base_q_);
    }
    return out;
  }
  Code from_base_coeffs(const CodePoly& c) const {
    long long code = 0, scale = 1;
    for (std::size_t i = 0; i < c.size() && static_cast<int>(i) < rel_degree_; ++i) {
      code += scale * c[i];
      scale *= base_q_;
    }
    return static_cast<Code>(code);
  }

  /// All square roots of a.
  std::span<const Code> sqrt_roots(Code a) const {
    return {sqrt_flat_.data() + sqrt_off_[a], static_cast<std::size_t>(sqrt_off_[a + 1] - sqrt_off_[a])};
  }
  /// The unique b with b^p = a (Frobenius is a bijection on a finite field).
  Code frobenius_inverse(Code a) const { return frob_inv_[a]; }
  /// Whether T^2 + bT + c has a root in F_Q.
  bool quadratic_has_root(Code b, Code c) const { return quad_root_[b * q_ + c] != 0; }

  std::string format(Code a) const;
  Code parse(std::string_view text) const;

 private:
  FiniteField() = default;

  void build_prime_tables() {
    std::size_t Q = q_;
    add_.resize(Q * Q);
    mul_.resize(Q * Q);
    neg_.resize(Q);
    inv_.assign(Q, 0);
    for (std::size_t a = 0; a < Q; ++a) {
      neg_[a] = static_cast<Code>((Q - a) % Q);
      for (std::size_t b = 0; b < Q; ++b) {
        add_[a * Q + b] = static_cast<Code>((a + b) % Q);
        mul_[a * Q + b] = static_cast<Code>((a * b) % Q);
        if ((a * b) % Q == 1) inv_[a] = static_cast<Code>(b);
      }
    }
  }

  Code slow_mul(Code a, Code b) const {
    const FiniteField& B = *base_;
    CodePoly x = base_coeffs(a), y = base_coeffs(b);
    CodePoly r = poly::mod(B, poly::mul(B, x, y), modulus_);
    return from_base_coeffs(r);
  }

  void build_extension_tables() {
    const FiniteField& B = *base_;
    std::size_t Q = q_;
    add_.resize(Q * Q);
    neg_.resize(Q);
    for (std::size_t a = 0; a < Q; ++a) {
      CodePoly x = base_coeffs(static_cast<Code>(a));
      CodePoly nx(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) nx[i] = B.neg(x[i]);
      neg_[a] = from_base_coeffs(nx);
      for (std::size_t b = 0; b < Q; ++b) {
        CodePoly y = base_coeffs(static_cast<Code>(b));
        CodePoly s(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) s[i] = B.add(x[i], y[i]);
        add_[a * Q + b] = from_base_coeffs(s);
      }
    }
    // Log/exp tables from a primitive element, then a dense product table.
    std::vector<long long> primes;
    long long order = static_cast<long long>(Q) - 1, rest = order;
    for (long long d = 2; d * d <= rest; ++d)
      if (rest % d == 0) {
        primes.push_back(d);
        while (rest % d == 0) rest /= d;
      }
    if (rest > 1) primes.push_back(rest);
    auto slow_pow = [&](Code a, long long e) {
      Code r = 1;
      while (e > 0) {
        if (e & 1) r = slow_mul(r, a);
        a = slow_mul(a, a);
        e >>= 1;
      }
      return r;
    };
    Code gen = 0;
    for (Code c = 2; c < Q && gen == 0; ++c) {
      bool primitive = true;
      for (long long l : primes)
        if (slow_pow(c, order / l) == 1) {
          primitive = false;
          break;
        }
      if (primitive) gen = c;
    }
    if (Q == 2) gen = 1;
    if (gen == 0) fail(ErrorKind::InvalidField, "no primitive element found");
    std::vector<Code> exp(2 * order);
    std::vector<int> log(Q, -1);
    Code x = 1;
    for (long long i = 0; i < order; ++i) {
      if (log[x] != -1) fail(ErrorKind::InvalidField, "modulus is reducible");
      exp[i] = x;
      log[x] = static_cast<int>(i);
      x = slow_mul(x, gen);
    }
    for (long long i = order; i < 2 * order; ++i) exp[i] = exp[i - order];
    mul_.assign(Q * Q, 0);
    inv_.assign(Q, 0);
    for (std::size_t a = 1; a < Q; ++a) {
      inv_[a] = exp[(order - log[a]) % order];
      for (std::size_t b = 1; b < Q; ++b) mul_[a * Q + b] = exp[log[a] + log[b]];
    }
  }

  void build_root_tables() {
    std::size_t Q = q_;
    std::vector<std::vector<Code>> roots(Q);
    frob_inv_.assign(Q, 0);
    for (std::size_t x = 0; x < Q; ++x) {
      Code c = static_cast<Code>(x);
      roots[mul(c, c)].push_back(c);
      frob_inv_[pow(c, p_)] = c;
    }
    sqrt_off_.assign(Q + 1, 0);
    for (std::size_t a = 0; a < Q; ++a) {
      sqrt_off_[a + 1] = sqrt_off_[a] + static_cast<int>(roots[a].size());
      sqrt_flat_.insert(sqrt_flat_.end(), roots[a].begin(), roots[a].end());
    }
    quad_root_.assign(Q * Q, 0);
    for (std::size_t b = 0; b < Q; ++b)
      for (std::size_t y = 0; y < Q; ++y) {
        Code yy = static_cast<Code>(y);
        Code v = add(mul(yy, yy), mul(static_cast<Code>(b), yy));
        quad_root_[b * Q + neg(v)] = 1;
      }
  }

  int p_ = 0, n_ = 0, q_ = 0, rel_degree_ = 1, base_q_ = 0;
  Field base_;
  CodePoly modulus_;
  std::string symbol_;
  std::vector<Code> add_, mul_, neg_, inv_, frob_inv_, sqrt_flat_;
  std::vector<int> sqrt_off_;
  std::vector<std::uint8_t> quad_root_;
};

// ---------------------------------------------------------------------------
// Polynomial helpers (definitions).
// ---------------------------------------------------------------------------
namespace poly {

inline CodePoly add(const FiniteField& F, const CodePoly& a, const CodePoly& b) {
  CodePoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}

inline CodePoly sub(const FiniteField& F, const CodePoly& a, const CodePoly& b) {
  CodePoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}

inline CodePoly mul(const FiniteField& F, const CodePoly& a, const CodePoly& b) {
  if (a.empty() || b.empty()) return {};
  CodePoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

inline std::pair<CodePoly, CodePoly> divmod(const FiniteField& F, const CodePoly& a, const CodePoly& b) {
  CodePoly bb = b;
  trim(bb);
  if (bb.empty()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
  CodePoly r = a;
  trim(r);
  int db = degree(bb);
  if (degree(r) < db) return {{}, r};
  CodePoly q(r.size() - bb.size() + 1, 0);
  Code lead_inv = F.inv(bb.back());
  for (int i = degree(r); i >= db; --i) {
    Code c = F.mul(r[i], lead_inv);
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, bb[j]));
  }
  r.resize(db);
  trim(r);
  trim(q);
  return {q, r};
}

inline CodePoly mod(const FiniteField& F, const CodePoly& a, const CodePoly& b) { return divmod(F, a, b).second; }

inline CodePoly gcd(const FiniteField& F, CodePoly a, CodePoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    CodePoly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Code li = F.inv(a.back());
    for (auto& c : a) c = F.mul(c, li);
  }
  return a;
}

inline CodePoly powmod(const FiniteField& F, CodePoly base, unsigned long long e, const CodePoly& m) {
  CodePoly result{1};
  result = mod(F, result, m);
  base = mod(F, base, m);
  while (e > 0) {
    if (e & 1) result = mod(F, mul(F, result, base), m);
    base = mod(F, mul(F, base, base), m);
    e >>= 1;
  }
  return result;
}

inline Code eval(const FiniteField& F, const CodePoly& f, Code x) {
  Code acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f[i]);
  return acc;
}

inline bool is_irreducible(const FiniteField& F, const CodePoly& f_in) {
  CodePoly f = f_in;
  trim(f);
  int n = degree(f);
  if (n < 1) return false;
  if (n == 1) return true;
  if (n <= 3) {
    for (int x = 0; x < F.q(); ++x)
      if (eval(F, f, static_cast<Code>(x)) == 0) return false;
    return true;
  }
  // T^{q^d} computed by repeated q-th powering modulo f.
  CodePoly T{0, 1};
  CodePoly power = T;
  for (int d = 1; d < n; ++d) {
    power = powmod(F, power, static_cast<unsigned long long>(F.q()), f);
    CodePoly g = gcd(F, sub(F, power, T), f);
    if (degree(g) >= 1) return false;
  }
  return true;
}

}  // namespace poly

// ---------------------------------------------------------------------------
// Printing and parsing of field elements.
// ---------------------------------------------------------------------------
inline std::string FiniteField::format(Code a) const {
  if (rel_degree_ == 1 && !base_) return std::to_string(a);
  CodePoly c = base_coeffs(a);
  std::string out;
  for (int i = rel_degree_ - 1; i >= 0; --i) {
    if (c[i] == 0) continue;
    std::string coef = base_->format(c[i]);
    if (coef.find('+') != std::string::npos || coef.find('*') != std::string::npos) coef = "(" + coef + ")";
    std::string term;
    if (i == 0) {
      term = coef;
    } else {
      std::string mono = i == 1 ? symbol_ : symbol_ + "^" + std::to_string(i);
      term = c[i] == 1 ? mono : coef + "*" + mono;
    }
    if (!out.empty()) out += "+";
    out += term;
  }
  return out.empty() ? "0" : out;
}

namespace detail {

struct FieldAlgebra {
  using Value = Code;
  const FiniteField& F;

  Value integer(long long v, std::size_t) { return F.from_int(v); }
  Value name(std::string_view id, std::size_t pos) {
    // Walk the tower looking for a matching generator symbol.
    const FiniteField* level = &F;
    while (level) {
      if (level->relative_degree() > 1 && id == level->symbol()) return level->generator();
      level = level->base().get();
    }
    throw ParseError(pos, "unknown symbol '" + std::string(id) + "'");
  }
  Value call(std::string_view id, Value, std::size_t pos) {
    throw ParseError(pos, "unexpected call '" + std::string(id) + "'");
  }
  Value add(Value a, Value b, std::size_t) { return F.add(a, b); }
  Value sub(Value a, Value b, std::size_t) { return F.sub(a, b); }
  Value mul(Value a, Value b, std::size_t) { return F.mul(a, b); }
  Value neg(Value a, std::size_t) { return F.neg(a); }
  Value pow(Value a, long long e, std::size_t pos) {
    if (e < 0 && a == 0) throw ParseError(pos, "negative power of zero");
    return F.pow(a, e);
  }
};

}  // namespace detail

inline Code FiniteField::parse(std::string_view text) const {
  detail::FieldAlgebra alg{*this};
  return detail::parse_expression(text, alg);
}

// ---------------------------------------------------------------------------
// FieldElem: a code bound to its field.  The field must outlive the element.
// ---------------------------------------------------------------------------
struct FieldElem {
  const FiniteField* field = nullptr;
  Code code = 0;

  FieldElem() = default;
  FieldElem(const FiniteField* f, Code c) : field(f), code(c) {}
  FieldElem(const Field& f, Code c) : field(f.get()), code(c) {}

  static FieldElem from_int(const Field& f, long long v) { return {f, f->from_int(v)}; }
  static FieldElem parse(const Field& f, std::string_view text) { return {f, f->parse(text)}; }

  bool is_zero() const { return code == 0; }
  std::vector<int> coeffs() const { return field->coeffs(code); }
  std::string str() const { return field->format(code); }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.code == b.code && (a.field == b.field || (a.field && b.field && a.field->same_as(*b.field)));
  }
};

inline const FiniteField& common_field(const FieldElem& a, const FieldElem& b) {
  if (!a.field || !b.field) fail(ErrorKind::MixedFields, "element without a field");
  if (a.field != b.field && !a.field->same_as(*b.field)) fail(ErrorKind::MixedFields, "operands live in different fields");
  return *a.field;
}

enum class ArithOp { Add, Sub, Mul };

inline FieldElem ff_arith(ArithOp op, const FieldElem& a, const FieldElem& b) {
  const FiniteField& F = common_field(a, b);
  switch (op) {
    case ArithOp::Add: return {&F, F.add(a.code, b.code)};
    case ArithOp::Sub: return {&F, F.sub(a.code, b.code)};
    case ArithOp::Mul: return {&F, F.mul(a.code, b.code)};
  }
  return {};
}

inline FieldElem operator+(const FieldElem& a, const FieldElem& b) { return ff_arith(ArithOp::Add, a, b); }
inline FieldElem operator-(const FieldElem& a, const FieldElem& b) { return ff_arith(ArithOp::Sub, a, b); }
inline FieldElem operator*(const FieldElem& a, const FieldElem& b) { return ff_arith(ArithOp::Mul, a, b); }
inline FieldElem operator-(const FieldElem& a) { return {a.field, a.field->neg(a.code)}; }

inline FieldElem ff_inv(const FieldElem& a) { return {a.field, a.field->inv(a.code)}; }

/// All square roots of a, in increasing code order.  Exhaustive table lookup.
inline std::vector<FieldElem> ff_sqrt(const FieldElem& a) {
  std::vector<FieldElem> out;
  for (Code r : a.field->sqrt_roots(a.code)) out.emplace_back(a.field, r);
  return out;
}

/// a^{2^{n-1}}, the square root in characteristic 2.
inline FieldElem ff_sqrt_frobenius(const FieldElem& a) {
  if (a.field->p() != 2) fail(ErrorKind::MismatchedCharacteristic, "Frobenius square root needs characteristic 2");
  return {a.field, a.field->pow(a.code, static_cast<long long>(a.field->q() / 2))};
}

struct RootMultiplicity {
  Code root;
  int multiplicity;
};

/// Roots in F_Q with multiplicity, by exhaustive evaluation and repeated
/// division by (T - r).
inline std::vector<RootMultiplicity> poly_roots(const FiniteField& F, CodePoly f) {
  poly::trim(f);
  if (f.empty()) fail(ErrorKind::ZeroPolynomial, "roots of the zero polynomial");
  std::vector<RootMultiplicity> out;
  for (int x = 0; x < F.q() && poly::degree(f) >= 1; ++x) {
    Code r = static_cast<Code>(x);
    int mult = 0;
    while (poly::degree(f) >= 1 && poly::eval(F, f, r) == 0) {
      f = poly::divmod(F, f, CodePoly{F.neg(r), 1}).first;
      ++mult;
    }
    if (mult > 0) out.push_back({r, mult});
  }
  return out;
}

struct ElemRoot {
  FieldElem root;
  int multiplicity;
};

inline std::vector<ElemRoot> poly_roots(const std::vector<FieldElem>& coeffs_low_to_high) {
  if (coeffs_low_to_high.empty()) fail(ErrorKind::ZeroPolynomial, "roots of the zero polynomial");
  const FiniteField* F = coeffs_low_to_high.front().field;
  CodePoly f;
  for (const auto& c : coeffs_low_to_high) {
    common_field(coeffs_low_to_high.front(), c);
    f.push_back(c.code);
  }
  std::vector<ElemRoot> out;
  for (auto [r, m] : poly_roots(*F, f)) out.push_back({FieldElem(F, r), m});
  return out;
}

struct CubicStructure {
  enum Kind { Distinct3, DoubleSimple, Triple } kind = Distinct3;
  Code repeated = 0;             // double or triple root
  std::optional<Code> simple;    // the simple root when kind == DoubleSimple
  int roots_in_field = 0;        // distinct roots in F_Q
};

/// Root structure of T^3 + b T^2 + c T + d over the algebraic closure.
/// Repeated roots of a cubic over a perfect field are rational, so searching
/// F_Q is enough.
inline CubicStructure cubic_structure(const FiniteField& F, Code b, Code c, Code d) {
  auto roots = poly_roots(F, CodePoly{d, c, b, 1});
  CubicStructure s;
  s.roots_in_field = static_cast<int>(roots.size());
  for (const auto& r : roots) {
    if (r.multiplicity == 3) {
      s.kind = CubicStructure::Triple;
      s.repeated = r.root;
      return s;
    }
    if (r.multiplicity == 2) {
      s.kind = CubicStructure::DoubleSimple;
      s.repeated = r.root;
    }
  }
  if (s.kind == CubicStructure::DoubleSimple) {
    for (const auto& r : roots)
      if (r.multiplicity == 1) s.simple = r.root;
    if (!s.simple) fail(ErrorKind::InvalidField, "double root without a rational simple root");
  }
  return s;
}

inline CubicStructure cubic_structure(const std::vector<FieldElem>& f) {
  if (f.size() != 4) fail(ErrorKind::WrongDegree, "cubic_structure needs a cubic");
  for (const auto& c : f) common_field(f.front(), c);
  if (f[3].code != 1) fail(ErrorKind::NotMonic, "cubic must be monic");
  return cubic_structure(*f[0].field, f[2].code, f[1].code, f[0].code);
}

}  // namespace kodaira
