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
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "kodaira/density_local.hpp"
#include "kodaira/detail/expr_parser.hpp"
#include "kodaira/parallel.hpp"
#include "kodaira/rational.hpp"
#include "kodaira/tate.hpp"

namespace kodaira {

// Polynomials in t over F_q are CodePoly values, low degree first, trimmed.

struct Place {
  Field base;
  bool infinite = false;
  CodePoly poly;  // monic irreducible; empty for the infinite place
  int degree = 1;

  static Place infinity(const Field& F) { return {F, true, {}, 1}; }
  static Place finite(const Field& F, CodePoly f) {
    poly::trim(f);
    if (f.empty() || poly::degree(f) < 1) fail(ErrorKind::WrongDegree, "a place needs positive degree");
    if (f.back() != 1) fail(ErrorKind::NotMonic, "place polynomial must be monic");
    if (!poly::is_irreducible(*F, f)) fail(ErrorKind::InvalidField, "place polynomial is reducible");
    int d = poly::degree(f);
    return {F, false, std::move(f), d};
  }

  /// Q_P = q^deg P, as a big integer since it can exceed 64 bits.
  BigInt norm() const { return big_pow(base->q(), degree); }
  std::string str() const;
};

inline std::string format_poly(const FiniteField& F, const CodePoly& f, std::string_view var = "t") {
  std::string out;
  for (int i = poly::degree(f); i >= 0; --i) {
    Code c = f[i];
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    std::string cs = F.format(c);
    bool compound = cs.find_first_of("+*^") != std::string::npos;
    if (i == 0) {
      out += cs;
      continue;
    }
    if (c != 1) out += (compound ? "(" + cs + ")" : cs) + "*";
    out += std::string(var);
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

inline std::string Place::str() const { return infinite ? std::string("inf") : format_poly(*base, poly); }

// ---------------------------------------------------------------------------
// Irreducibles and place counts.
// ---------------------------------------------------------------------------
inline int mobius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  return n > 1 ? -result : result;
}

/// Number of monic irreducibles of degree d over F_q: (1/d) Σ_{e|d} μ(e) q^{d/e}.
inline BigInt necklace_count(long long q, int d) {
  BigInt sum = 0;
  for (int e = 1; e <= d; ++e)
    if (d % e == 0) sum += mobius(e) * big_pow(q, d / e);
  return sum / d;
}

namespace detail {

/// Monic polynomial of degree d whose lower coefficients are the base-q digits of idx.
inline CodePoly monic_from_index(int q, int d, long long idx) {
  CodePoly f(d + 1, 0);
  for (int i = 0; i < d; ++i, idx /= q) f[i] = static_cast<Code>(idx % q);
  f[d] = 1;
  return f;
}

inline bool divides(const FiniteField& F, const CodePoly& g, const CodePoly& f) {
  return poly::mod(F, f, g).empty();
}

/// Process-wide cache of sieved irreducibles keyed by field identity and degree.
class IrreducibleCache {
 public:
  static IrreducibleCache& instance() {
    static IrreducibleCache cache;
    return cache;
  }
  const std::vector<CodePoly>* find(const FiniteField* F, int d) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find({F, d});
    return it == table_.end() ? nullptr : &it->second;
  }
  const std::vector<CodePoly>& store(const Field& F, int d, std::vector<CodePoly> polys) {
    std::lock_guard<std::mutex> lock(mu_);
    keep_alive_.push_back(F);
    return table_.emplace(std::make_pair(F.get(), d), std::move(polys)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<const FiniteField*, int>, std::vector<CodePoly>> table_;
  std::vector<Field> keep_alive_;
};

}  // namespace detail

inline constexpr long long kSieveBudget = 1LL << 22;

/// All monic irreducibles of degree d, by sieving every monic polynomial of
/// degree d against the irreducibles of degree <= d/2.
inline const std::vector<CodePoly>& monic_irreducibles(const Field& field, int d, long long budget = kSieveBudget) {
  if (d < 1) fail(ErrorKind::WrongDegree, "degree must be positive");
  auto& cache = detail::IrreducibleCache::instance();
  if (auto hit = cache.find(field.get(), d)) return *hit;
  const FiniteField& F = *field;
  const int q = F.q();
  BigInt total = big_pow(q, d);
  if (total > budget) fail(ErrorKind::BudgetExceeded, "q^d exceeds the sieve budget");
  std::vector<const std::vector<CodePoly>*> lower;
  for (int e = 1; 2 * e <= d; ++e) lower.push_back(&monic_irreducibles(field, e, budget));
  std::vector<CodePoly> out;
  long long n = static_cast<long long>(total);
  for (long long idx = 0; idx < n; ++idx) {
    CodePoly f = detail::monic_from_index(q, d, idx);
    bool irreducible = true;
    for (const auto* group : lower) {
      for (const auto& g : *group)
        if (detail::divides(F, g, f)) {
          irreducible = false;
          break;
        }
      if (!irreducible) break;
    }
    if (irreducible) out.push_back(std::move(f));
  }
  if (BigInt(out.size()) != necklace_count(q, d))
    throw std::logic_error("irreducible sieve disagrees with the necklace count");
  return cache.store(field, d, std::move(out));
}

/// T_d: places of degree d of F_q(t), counting the infinite place in T_1.
inline BigInt place_count(long long q, int d) { return d == 1 ? BigInt(q + 1) : necklace_count(q, d); }

// ---------------------------------------------------------------------------
// Zeta function and the global density formula.
// ---------------------------------------------------------------------------

/// ζ(s) of F_q(t): 1/((1 - q^{-s})(1 - q^{1-s})) = q^{2s-1}/((q^s - 1)(q^{s-1} - 1)).
inline Rational zeta_value(long long q, int s, int genus = 0) {
  if (genus != 0) fail(ErrorKind::UnsupportedField, "only the rational function field is supported");
  if (q < 2) fail(ErrorKind::InvalidField, "q must be at least 2");
  if (s < 2) fail(ErrorKind::WrongDegree, "s must be at least 2");
  BigInt qs = big_pow(q, s), qs1 = big_pow(q, s - 1);
  return Rational(qs * qs1, (qs - 1) * (qs1 - 1));
}

struct EulerProduct {
  long double value = 1;
  std::vector<BigInt> counts;  // T_1..T_D
  std::vector<bool> sieved;    // whether T_d came from the sieve
};

/// Π_{d <= D} (1 - q^{-ds})^{-T_d}.  T_d is sieved when q^d fits the budget,
/// otherwise it comes from the necklace formula.
inline EulerProduct euler_product_truncated(const Field& field, int s, int D, long long sieve_budget = 1LL << 16) {
  const long long q = field->q();
  EulerProduct out;
  long double log_sum = 0;
  for (int d = 1; d <= D; ++d) {
    BigInt Td;
    bool sieved = big_pow(q, d) <= sieve_budget;
    if (sieved) {
      Td = BigInt(monic_irreducibles(field, d, sieve_budget).size());
      if (d == 1) Td += 1;
    } else {
      Td = place_count(q, d);
    }
    long double x = std::pow(static_cast<long double>(q), -static_cast<long double>(d) * s);
    log_sum -= Td.convert_to<long double>() * std::log1p(-x);
    out.counts.push_back(Td);
    out.sieved.push_back(sieved);
  }
  out.value = std::exp(log_sum);
  return out;
}

/// (1/ζ(10(k+1))) Π_{P in S} Q_P^{10(k+1)}/(Q_P^{10(k+1)} - 1), with S given by
/// the degrees of its places.
inline Rational global_density_formula(long long q, const std::vector<int>& s_degrees, int k) {
  if (s_degrees.empty()) fail(ErrorKind::EmptyS, "S must contain at least one place");
  if (k < 0) fail(ErrorKind::WrongDegree, "k must be non-negative");
  int e = 10 * (k + 1);
  Rational zeta = zeta_value(q, e);
  Rational value = Rational(zeta.denominator(), zeta.numerator());
  for (int deg : s_degrees) {
    if (deg < 1) fail(ErrorKind::WrongDegree, "place degrees must be positive");
    BigInt Qe = big_pow(q, static_cast<long long>(deg) * e);
    value *= Rational(Qe, Qe - 1);
  }
  return value;
}

// ---------------------------------------------------------------------------
// Curves over F_q[t].
// ---------------------------------------------------------------------------
struct GlobalCurve {
  Field field;
  std::array<CodePoly, 5> a;  // a1, a2, a3, a4, a6

  std::string str() const {
    std::string out = "[";
    for (int i = 0; i < 5; ++i) out += (i ? ", " : "") + format_poly(*field, a[i]);
    return out + "]";
  }
};

struct GlobalInvariants {
  CodePoly b2, b4, b6, b8, delta;
};

inline GlobalInvariants global_invariants(const GlobalCurve& E) {
  const FiniteField& F = *E.field;
  auto M = [&](const CodePoly& x, const CodePoly& y) { return poly::mul(F, x, y); };
  auto P = [&](const CodePoly& x, const CodePoly& y) { return poly::add(F, x, y); };
  auto S = [&](const CodePoly& x, const CodePoly& y) { return poly::sub(F, x, y); };
  auto k = [&](long long c, const CodePoly& x) { return poly::mul(F, CodePoly{F.from_int(c)}, x); };
  const auto &a1 = E.a[0], &a2 = E.a[1], &a3 = E.a[2], &a4 = E.a[3], &a6 = E.a[4];
  GlobalInvariants g;
  CodePoly a1sq = M(a1, a1);
  g.b2 = P(a1sq, k(4, a2));
  g.b4 = P(M(a1, a3), k(2, a4));
  g.b6 = P(M(a3, a3), k(4, a6));
  g.b8 = S(P(P(M(a1sq, a6), k(4, M(a2, a6))), M(a2, M(a3, a3))), P(M(a1, M(a3, a4)), M(a4, a4)));
  CodePoly t1 = M(M(g.b2, g.b2), g.b8);
  CodePoly t2 = k(8, M(g.b4, M(g.b4, g.b4)));
  CodePoly t3 = k(27, M(g.b6, g.b6));
  CodePoly t4 = k(9, M(g.b2, M(g.b4, g.b6)));
  g.delta = S(t4, P(P(t1, t2), t3));
  return g;
}

inline CodePoly global_discriminant(const GlobalCurve& E) { return global_invariants(E).delta; }

/// Multiplicity of the monic irreducible P in a nonzero f.
inline int poly_valuation(const FiniteField& F, CodePoly f, const CodePoly& P) {
  poly::trim(f);
  if (f.empty()) fail(ErrorKind::DivisionByZero, "valuation of the zero polynomial");
  int v = 0;
  for (;;) {
    auto [quot, rem] = poly::divmod(F, f, P);
    if (!rem.empty()) return v;
    f = std::move(quot);
    ++v;
  }
}

/// Residue field F_q[t]/(P), with P itself as the modulus over F_q.
inline Field residue_field(const Place& P) {
  if (P.infinite) fail(ErrorKind::InfinitePlace, "the infinite place has no polynomial model here");
  return FiniteField::extension(P.base, P.poly, "t");
}

/// The P-adic expansion a = Σ r_i P^i with deg r_i < deg P, as the list of r_i.
inline std::vector<CodePoly> padic_digits(const CodePoly& a, const Place& P) {
  if (P.infinite) fail(ErrorKind::InfinitePlace, "cannot expand at the infinite place");
  std::vector<CodePoly> out;
  CodePoly rest = a;
  poly::trim(rest);
  while (!rest.empty()) {
    auto [quot, rem] = poly::divmod(*P.base, rest, P.poly);
    out.push_back(std::move(rem));
    rest = std::move(quot);
  }
  return out;
}

/// Inverse of padic_digits.
inline CodePoly resum_digits(const FiniteField& F, const std::vector<CodePoly>& digits, const CodePoly& P) {
  CodePoly acc;
  for (std::size_t i = digits.size(); i-- > 0;) acc = poly::add(F, poly::mul(F, acc, P), digits[i]);
  return acc;
}

/// The image of t in F_Q[[π]] with π = P(t): the root of P(X) = π lifting the
/// residue class of t, by Newton iteration to `precision` digits.
inline PadicElem lift_of_t(const Place& P, const Field& residue, int precision) {
  const FiniteField* R = residue.get();
  auto eval = [&](const CodePoly& f, const PadicElem& x) {
    PadicElem acc = PadicElem::zero(R);
    for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + PadicElem::constant(R, f[i])).truncate(precision);
    return acc;
  };
  CodePoly deriv;
  for (std::size_t i = 1; i < P.poly.size(); ++i) deriv.push_back(P.base->mul(P.base->from_int(i), P.poly[i]));
  PadicElem pi = PadicElem::monomial(R, 1, 1);
  PadicElem x = PadicElem::constant(R, R->from_base_coeffs({0, 1}));
  for (int known = 1; known < 2 * precision; known *= 2) {
    PadicElem fx = eval(P.poly, x) - pi;
    x = (x - fx * padic_unit_inverse(eval(deriv, x), precision)).truncate(precision);
  }
  return x.truncate(precision);
}

/// Image of a in R_P.  At a degree-one place P = t - c the expansion in
/// powers of P is the Taylor expansion at c, so the result is exact.  At
/// higher degree the polynomial remainders do not respect multiplication, so
/// a is evaluated at the lift of t instead, to `precision` digits.
inline PadicElem localize_poly(const CodePoly& a, const Place& P, const Field& residue, int precision) {
  if (P.infinite) fail(ErrorKind::InfinitePlace, "cannot localize at the infinite place");
  if (P.degree == 1) {
    Digits digits;
    for (const auto& r : padic_digits(a, P)) digits.push_back(r.empty() ? Code{0} : r[0]);
    return PadicElem::exact_digits(residue.get(), digits);
  }
  PadicElem x = lift_of_t(P, residue, precision);
  PadicElem acc = PadicElem::zero(residue.get());
  for (std::size_t i = a.size(); i-- > 0;) acc = (acc * x + PadicElem::constant(residue.get(), a[i])).truncate(precision);
  return acc;
}

/// Default working precision at a place: enough that v_P(Δ) and the Tate
/// steps after it are decided.
inline int default_local_precision(int v_delta) { return 2 * v_delta + 24; }

inline WeierstrassCurve localize_at(const GlobalCurve& E, const Place& P, const Field& residue, int precision = 0) {
  if (precision <= 0 && P.degree > 1) {
    CodePoly delta = global_discriminant(E);
    precision = default_local_precision(delta.empty() ? 0 : poly_valuation(*E.field, delta, P.poly));
  }
  std::array<PadicElem, 5> c;
  for (int i = 0; i < 5; ++i) c[i] = localize_poly(E.a[i], P, residue, precision);
  return {residue, c[0], c[1], c[2], c[3], c[4]};
}

inline WeierstrassCurve localize_at(const GlobalCurve& E, const Place& P) {
  return localize_at(E, P, residue_field(P));
}

/// Tate's algorithm at a finite place, raising the working precision until the
/// outcome is decided.
inline Decided local_tate(const GlobalCurve& E, const Place& P, const Field& residue, int v_delta) {
  for (int precision = default_local_precision(v_delta), round = 0; round < 4; ++round, precision *= 2) {
    TateOutcome o = run_tate(localize_at(E, P, residue, precision));
    if (const auto* dec = std::get_if<Decided>(&o)) return *dec;
    if (P.degree == 1) break;
  }
  fail(ErrorKind::InsufficientPrecision, "local reduction type stayed undecided");
}

struct BadPlace {
  Place place;
  int valuation = 0;
};

namespace detail {

inline CodePoly powmod_big(const FiniteField& F, CodePoly base, const BigInt& e, const CodePoly& m) {
  CodePoly result = poly::mod(F, CodePoly{1}, m);
  base = poly::mod(F, base, m);
  if (e == 0) return result;
  for (long long bit = static_cast<long long>(boost::multiprecision::msb(e)); bit >= 0; --bit) {
    result = poly::mod(F, poly::mul(F, result, result), m);
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(bit))) result = poly::mod(F, poly::mul(F, result, base), m);
  }
  return result;
}

/// Splits a monic product of distinct degree-d irreducibles into its factors
/// (equal-degree splitting with a fixed pseudo-random sequence of trial
/// polynomials, so the output is deterministic).
inline void split_equal_degree(const FiniteField& F, const CodePoly& f, int d, std::vector<CodePoly>& out) {
  if (poly::degree(f) == d) {
    out.push_back(f);
    return;
  }
  const int n = poly::degree(f);
  const int q = F.q();
  std::uint64_t state = 0x5EEDULL + static_cast<std::uint64_t>(n);
  for (;;) {
    CodePoly a(n, 0);
    for (auto& c : a) c = static_cast<Code>(splitmix64(state) % static_cast<std::uint64_t>(q));
    poly::trim(a);
    if (poly::degree(a) < 1) continue;
    CodePoly b;
    if (F.p() == 2) {
      // Absolute trace to F_2: a + a^2 + ... + a^{2^{m d - 1}}.
      CodePoly term = a;
      for (int i = 0; i < F.degree() * d; ++i) {
        b = poly::add(F, b, term);
        term = poly::mod(F, poly::mul(F, term, term), f);
      }
    } else {
      b = poly::sub(F, powmod_big(F, a, (big_pow(q, d) - 1) / 2, f), CodePoly{1});
    }
    CodePoly g = poly::gcd(F, b, f);
    if (poly::degree(g) >= 1 && poly::degree(g) < n) {
      split_equal_degree(F, g, d, out);
      split_equal_degree(F, poly::divmod(F, f, g).first, d, out);
      return;
    }
  }
}

}  // namespace detail

inline constexpr long long kTrialDivisionLimit = 1LL << 12;

/// Factors Δ(E) by trial division against the sieved irreducibles.  Degrees
/// with no factor are skipped with gcd(T^{q^d} - T, rest), and a degree-d part
/// of degree exactly d is already irreducible, so the sieve only runs when two
/// or more factors share a degree.  Past kTrialDivisionLimit candidates that
/// part is split by equal-degree factorization instead.
inline std::vector<BadPlace> bad_places(const GlobalCurve& E) {
  const FiniteField& F = *E.field;
  CodePoly rest = global_discriminant(E);
  if (rest.empty()) fail(ErrorKind::SingularCurve, "discriminant is zero");
  std::vector<BadPlace> out;
  auto strip = [&](const CodePoly& g, int d) {
    int v = 0;
    for (;;) {
      auto [quot, rem] = poly::divmod(F, rest, g);
      if (!rem.empty()) break;
      rest = std::move(quot);
      ++v;
    }
    if (v > 0) out.push_back({Place{E.field, false, g, d}, v});
  };
  const CodePoly T{0, 1};
  CodePoly frob = T;  // T^{q^d} mod rest
  for (int d = 1; poly::degree(rest) >= 1; ++d) {
    if (2 * d > poly::degree(rest)) {
      // Every factor of degree < d is gone, so what is left is irreducible.
      Code li = F.inv(rest.back());
      for (auto& c : rest) c = F.mul(c, li);
      out.push_back({Place{E.field, false, rest, poly::degree(rest)}, 1});
      break;
    }
    frob = poly::powmod(F, frob, static_cast<unsigned long long>(F.q()), rest);
    CodePoly part = poly::gcd(F, poly::sub(F, frob, T), rest);
    if (poly::degree(part) < 1) continue;
    if (poly::degree(part) == d) {
      strip(part, d);
    } else if (big_pow(F.q(), d) <= kTrialDivisionLimit) {
      for (const auto& g : monic_irreducibles(E.field, d)) {
        if (!detail::divides(F, g, part)) continue;
        strip(g, d);
      }
    } else {
      std::vector<CodePoly> factors;
      detail::split_equal_degree(F, part, d, factors);
      std::sort(factors.begin(), factors.end(), [](const CodePoly& x, const CodePoly& y) {
        return std::lexicographical_compare(x.rbegin(), x.rend(), y.rbegin(), y.rend());
      });
      for (const auto& g : factors) strip(g, d);
    }
    if (poly::degree(rest) >= 1) frob = poly::mod(F, frob, rest);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing.
// ---------------------------------------------------------------------------
namespace detail {

struct PolyAlgebra {
  using Value = CodePoly;
  const FiniteField& F;
  std::string_view var;

  Value integer(long long v, std::size_t) {
    CodePoly r{F.from_int(v)};
    poly::trim(r);
    return r;
  }
  Value name(std::string_view id, std::size_t pos) {
    if (id == var) return {0, 1};
    FieldAlgebra fa{F};
    CodePoly r{fa.name(id, pos)};
    poly::trim(r);
    return r;
  }
  Value call(std::string_view id, Value, std::size_t pos) {
    throw ParseError(pos, "unexpected call '" + std::string(id) + "'");
  }
  Value add(Value a, Value b, std::size_t) { return poly::add(F, a, b); }
  Value sub(Value a, Value b, std::size_t) { return poly::sub(F, a, b); }
  Value mul(Value a, Value b, std::size_t) { return poly::mul(F, a, b); }
  Value neg(Value a, std::size_t) { return poly::sub(F, {}, a); }
  Value pow(Value a, long long e, std::size_t pos) {
    if (e < 0) {
      if (a.size() == 1) {
        CodePoly r{F.pow(a[0], e)};
        return r;
      }
      throw ParseError(pos, "negative power of a non-constant polynomial");
    }
    CodePoly r{1};
    for (long long i = 0; i < e; ++i) r = poly::mul(F, r, a);
    poly::trim(r);
    return r;
  }
};

}  // namespace detail

inline CodePoly parse_poly(const Field& F, std::string_view text, std::string_view var = "t") {
  detail::PolyAlgebra alg{*F, var};
  return detail::parse_expression(text, alg);
}

/// Five comma-separated polynomials in t, optionally wrapped in brackets.
inline GlobalCurve parse_global_curve(const Field& F, std::string_view text) {
  std::size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  if (begin < end && text[begin] == '[') {
    if (text[end - 1] != ']') throw ParseError(end, "expected ']'");
    ++begin;
    --end;
  }
  GlobalCurve E{F, {}};
  int count = 0, depth = 0;
  std::size_t start = begin;
  for (std::size_t j = begin; j <= end; ++j) {
    char c = j < end ? text[j] : ',';
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c != ',' || depth != 0) continue;
    if (count == 5) throw ParseError(j, "expected five coefficients");
    try {
      E.a[count++] = parse_poly(F, text.substr(start, j - start));
    } catch (const ParseError& e) {
      throw ParseError(start + e.position(), "bad coefficient");
    }
    start = j + 1;
  }
  if (count != 5) throw ParseError(end, "expected five coefficients");
  return E;
}

// ---------------------------------------------------------------------------
// Census over curves with coefficients of bounded degree.
// ---------------------------------------------------------------------------
struct CensusRow {
  int d = 0;
  std::uint64_t total = 0;
  std::uint64_t singular = 0;
  std::uint64_t pass = 0;
  Rational fraction = 0;  // pass / (total - singular)
};

struct GlobalDensityResult {
  int q = 0;
  int k = 0;
  bool sampled = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  Rational formula = 0;
  std::vector<CensusRow> rows;
};

struct CensusOptions {
  bool sampled = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  int workers = 1;
  long long budget = 1LL << 24;  // curves per degree bound in exhaustive mode
};

namespace detail {

struct PlaceTable {
  std::vector<Place> places;
  std::vector<Field> fields;
};

/// Every finite place of degree <= max_degree with its residue field.
inline PlaceTable places_up_to(const Field& F, int max_degree) {
  PlaceTable t;
  for (int d = 1; d <= max_degree; ++d) {
    if (big_pow(F->q(), d) > kMaxFieldSize)
      fail(ErrorKind::UnsupportedField, "residue field of a degree-" + std::to_string(d) + " place is too large");
    for (const auto& g : monic_irreducibles(F, d)) {
      t.places.push_back(Place{F, false, g, d});
      t.fields.push_back(residue_field(t.places.back()));
    }
  }
  return t;
}

inline GlobalCurve curve_from_index(const Field& F, int d, std::uint64_t idx) {
  const int q = F->q();
  GlobalCurve E{F, {}};
  for (auto& c : E.a) {
    c.assign(d + 1, 0);
    for (int i = 0; i <= d; ++i, idx /= q) c[i] = static_cast<Code>(idx % q);
    poly::trim(c);
  }
  return E;
}

inline GlobalCurve curve_from_stream(const Field& F, int d, SampleStream& rng) {
  GlobalCurve E{F, {}};
  for (auto& c : E.a) {
    c.assign(d + 1, 0);
    for (auto& x : c) x = rng.uniform(F->q());
    poly::trim(c);
  }
  return E;
}

enum class CurveVerdict { Singular, Pass, Fail };

/// N_P(E) <= k at every finite place.  Each completed iteration lowers v_P(Δ)
/// by 12, so only places with v_P(Δ) >= 12(k+1) need Tate's algorithm, and
/// those have degree at most deg Δ / (12(k+1)).
inline CurveVerdict classify_curve(const GlobalCurve& E, int k, const PlaceTable& table) {
  CodePoly delta = global_discriminant(E);
  if (delta.empty()) return CurveVerdict::Singular;
  const int threshold = 12 * (k + 1);
  const int max_deg = poly::degree(delta) / threshold;
  for (std::size_t i = 0; i < table.places.size(); ++i) {
    const Place& P = table.places[i];
    if (P.degree > max_deg) break;
    int v = poly_valuation(*E.field, delta, P.poly);
    if (v < threshold) continue;
    if (local_tate(E, P, table.fields[i], v).iterations > k) return CurveVerdict::Fail;
  }
  return CurveVerdict::Pass;
}

}  // namespace detail

inline std::uint64_t census_size(int q, int d) {
  BigInt n = big_pow(q, 5LL * (d + 1));
  if (n > BigInt(std::numeric_limits<std::int64_t>::max())) fail(ErrorKind::BudgetExceeded, "census too large");
  return static_cast<std::uint64_t>(n);
}

/// Fraction of curves with N_P(E) <= k at every finite place, for each degree
/// bound d = 1..d_max, exhaustively or from `samples` seeded draws.
inline GlobalDensityResult empirical_global(const Field& field, int k, int d_max, const CensusOptions& opt = {}) {
  if (k < 0) fail(ErrorKind::WrongDegree, "k must be non-negative");
  if (d_max < 1) fail(ErrorKind::WrongDegree, "d_max must be positive");
  const int q = field->q();
  GlobalDensityResult res;
  res.q = q;
  res.k = k;
  res.sampled = opt.sampled;
  res.samples = opt.samples;
  res.seed = opt.seed;
  res.formula = global_density_formula(q, {1}, k);
  if (!opt.sampled)
    for (int d = 1; d <= d_max; ++d)
      if (BigInt(census_size(q, d)) > opt.budget) fail(ErrorKind::BudgetExceeded, "exhaustive census too large");
  detail::PlaceTable table = detail::places_up_to(field, d_max / (k + 1));

  for (int d = 1; d <= d_max; ++d) {
    CensusRow row;
    row.d = d;
    row.total = opt.sampled ? opt.samples : census_size(q, d);
    constexpr std::uint64_t kChunk = 1 << 14;
    std::size_t chunks = static_cast<std::size_t>((row.total + kChunk - 1) / kChunk);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> parts(chunks);  // (singular, pass)
    parallel_chunks(chunks, opt.workers, [&](std::size_t chunk) {
      std::uint64_t begin = chunk * kChunk, end = std::min(row.total, begin + kChunk);
      auto& [singular, pass] = parts[chunk];
      for (std::uint64_t i = begin; i < end; ++i) {
        GlobalCurve E;
        if (opt.sampled) {
          detail::SampleStream rng(opt.seed + 0x9E37ULL * static_cast<std::uint64_t>(d), i);
          E = detail::curve_from_stream(field, d, rng);
        } else {
          E = detail::curve_from_index(field, d, i);
        }
        switch (detail::classify_curve(E, k, table)) {
          case detail::CurveVerdict::Singular: ++singular; break;
          case detail::CurveVerdict::Pass: ++pass; break;
          case detail::CurveVerdict::Fail: break;
        }
      }
    });
    for (const auto& [s, p] : parts) {
      row.singular += s;
      row.pass += p;
    }
    std::uint64_t nonsingular = row.total - row.singular;
    row.fraction = nonsingular ? Rational(BigInt(row.pass), BigInt(nonsingular)) : Rational(0);
    res.rows.push_back(row);
  }
  return res;
}

/// Independent recount for one degree bound: factors Δ completely and asks the
/// witness search at every bad place small enough to search.  Places beyond
/// `search_cap` must have v_P(Δ) < 12(k+1), which already rules out a witness.
inline CensusRow oracle_recount(const Field& field, int k, int d, int search_cap = 16) {
  const int q = field->q();
  CensusRow row;
  row.d = d;
  row.total = census_size(q, d);
  std::map<CodePoly, Field> fields;
  for (std::uint64_t i = 0; i < row.total; ++i) {
    GlobalCurve E = detail::curve_from_index(field, d, i);
    if (global_discriminant(E).empty()) {
      ++row.singular;
      continue;
    }
    bool ok = true;
    for (const auto& bp : bad_places(E)) {
      if (bp.place.norm() > search_cap) {
        if (bp.valuation >= 12 * (k + 1)) fail(ErrorKind::BudgetExceeded, "bad place too large for the witness search");
        continue;
      }
      auto it = fields.find(bp.place.poly);
      if (it == fields.end()) it = fields.emplace(bp.place.poly, residue_field(bp.place)).first;
      if (minimality_certificate(localize_at(E, bp.place, it->second, 6 * (k + 1) + 1), k + 1)) {
        ok = false;
        break;
      }
    }
    if (ok) ++row.pass;
  }
  std::uint64_t nonsingular = row.total - row.singular;
  row.fraction = nonsingular ? Rational(BigInt(row.pass), BigInt(nonsingular)) : Rational(0);
  return row;
}

}  // namespace kodaira
