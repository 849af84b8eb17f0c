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

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "kodaira/parallel.hpp"
#include "kodaira/rational.hpp"
#include "kodaira/tate.hpp"

namespace kodaira {

struct DensityKey {
  KodairaType kodaira;
  int tamagawa = 1;
  int iterations = 0;

  std::string str() const {
    return kodaira.str() + ",c=" + std::to_string(tamagawa) + ",k=" + std::to_string(iterations);
  }
  friend auto operator<=>(const DensityKey&, const DensityKey&) = default;
};

inline DensityKey key_of(const Decided& d) { return {d.kodaira, d.tamagawa, d.iterations}; }

// ---------------------------------------------------------------------------
// Closed forms.
// ---------------------------------------------------------------------------

/// Whether Tate's algorithm can produce this (type, c) pair at all.
inline bool admissible(const DensityKey& key) {
  using K = KodairaType;
  int c = key.tamagawa, N = key.kodaira.n;
  if (key.iterations < 0) return false;
  switch (key.kodaira.family) {
    case K::I0: return c == 1;
    case K::In:
      if (N < 1) return false;
      if (N == 1) return c == 1;
      if (N == 2) return c == 2;
      return c == N || c == 2 * (N / 2) - N + 2;
    case K::II: return c == 1;
    case K::III: return c == 2;
    case K::IV: return c == 1 || c == 3;
    case K::I0star: return c == 1 || c == 2 || c == 4;
    case K::Instar: return N >= 1 && (c == 2 || c == 4);
    case K::IVstar: return c == 1 || c == 3;
    case K::IIIstar: return c == 2;
    case K::IIstar: return c == 1;
  }
  return false;
}

/// Haar density of the key's set of curves in R_P^N (any of the reduced forms).
inline Rational closed_form(long long Q, const DensityKey& key) {
  using K = KodairaType;
  if (Q < 2) fail(ErrorKind::InvalidField, "Q must be at least 2");
  if (!admissible(key)) fail(ErrorKind::InadmissibleKey, key.str());
  BigInt q = Q, q1 = Q - 1;
  auto inv_q = [&](long long e) { return big_pow(Q, e); };
  int N = key.kodaira.n;
  Rational v;
  switch (key.kodaira.family) {
    case K::I0: v = Rational(q1, q); break;
    case K::In:
      if (N == 1)
        v = Rational(q1 * q1, inv_q(3));
      else if (N == 2)
        v = Rational(q1 * q1, inv_q(4));
      else
        v = Rational(q1 * q1, 2 * inv_q(N + 2));
      break;
    case K::II: v = Rational(q1, inv_q(3)); break;
    case K::III: v = Rational(q1, inv_q(4)); break;
    case K::IV: v = Rational(q1, 2 * inv_q(5)); break;
    case K::I0star:
      if (key.tamagawa == 1) v = Rational(q * q - 1, 3 * inv_q(7));
      if (key.tamagawa == 2) v = Rational(q1, 2 * inv_q(6));
      if (key.tamagawa == 4) v = Rational(q * q - 3 * q + 2, 6 * inv_q(7));
      break;
    case K::Instar: v = Rational(q1 * q1, 2 * inv_q(N + 7)); break;
    case K::IVstar: v = Rational(q1, 2 * inv_q(8)); break;
    case K::IIIstar: v = Rational(q1, inv_q(9)); break;
    case K::IIstar: v = Rational(q1, inv_q(10)); break;
  }
  return v * inverse_power(Q, 10LL * key.iterations);
}

/// Admissible keys with N <= max_n and iterations in [0, max_k].
inline std::vector<DensityKey> table_keys(int max_n, int max_k = 0) {
  using K = KodairaType;
  std::vector<DensityKey> keys;
  for (int k = 0; k <= max_k; ++k) {
    auto add = [&](K t, int c) {
      DensityKey key{t, c, k};
      if (admissible(key) && std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    };
    add(K::make(K::I0), 1);
    for (int N = 1; N <= max_n; ++N) {
      add(K::make(K::In, N), 2 * (N / 2) - N + 2);
      add(K::make(K::In, N), N);
    }
    add(K::make(K::II), 1);
    add(K::make(K::III), 2);
    add(K::make(K::IV), 1);
    add(K::make(K::IV), 3);
    for (int c : {1, 2, 4}) add(K::make(K::I0star), c);
    for (int N = 1; N <= max_n; ++N)
      for (int c : {2, 4}) add(K::make(K::Instar, N), c);
    add(K::make(K::IVstar), 1);
    add(K::make(K::IVstar), 3);
    add(K::make(K::IIIstar), 2);
    add(K::make(K::IIstar), 1);
  }
  return keys;
}

struct ClosedFormTotals {
  /// Per-type totals at iteration 0, summed over N and c ("I_N", "I_N*" collect all N).
  std::vector<std::pair<std::string, Rational>> per_type;
  Rational grand_total_k0;
  Rational grand_total_all_k;
};

/// Sums the table.  The I_N and I_N* families are summed exactly: finitely
/// many terms from closed_form plus the geometric tail in closed form.
inline ClosedFormTotals closed_form_totals(long long Q) {
  using K = KodairaType;
  constexpr int kHead = 6;  // explicit terms before the geometric tail
  auto sum_keys = [&](K t, std::initializer_list<int> cs) {
    Rational s = 0;
    for (int c : cs) s += closed_form(Q, {t, c, 0});
    return s;
  };
  ClosedFormTotals out;
  out.per_type.emplace_back("I0", sum_keys(K::make(K::I0), {1}));
  Rational in_total = 0;
  for (int N = 1; N <= kHead; ++N) {
    DensityKey split{K::make(K::In, N), N, 0}, nonsplit{K::make(K::In, N), 2 * (N / 2) - N + 2, 0};
    in_total += closed_form(Q, split);
    if (!(nonsplit == split)) in_total += closed_form(Q, nonsplit);
  }
  // Sum over N > kHead of (Q-1)^2/Q^{N+2} equals (Q-1) Q^{-(kHead+2)}.
  in_total += Rational(BigInt(Q - 1), big_pow(Q, kHead + 2));
  out.per_type.emplace_back("I_N", in_total);
  out.per_type.emplace_back("II", sum_keys(K::make(K::II), {1}));
  out.per_type.emplace_back("III", sum_keys(K::make(K::III), {2}));
  out.per_type.emplace_back("IV", sum_keys(K::make(K::IV), {1, 3}));
  out.per_type.emplace_back("I0*", sum_keys(K::make(K::I0star), {1, 2, 4}));
  Rational instar_total = 0;
  for (int N = 1; N <= kHead; ++N) instar_total += sum_keys(K::make(K::Instar, N), {2, 4});
  // Sum over N > kHead of (Q-1)^2/Q^{N+7} equals (Q-1) Q^{-(kHead+7)}.
  instar_total += Rational(BigInt(Q - 1), big_pow(Q, kHead + 7));
  out.per_type.emplace_back("I_N*", instar_total);
  out.per_type.emplace_back("IV*", sum_keys(K::make(K::IVstar), {1, 3}));
  out.per_type.emplace_back("III*", sum_keys(K::make(K::IIIstar), {2}));
  out.per_type.emplace_back("II*", sum_keys(K::make(K::IIstar), {1}));
  out.grand_total_k0 = 0;
  for (const auto& [name, v] : out.per_type) out.grand_total_k0 += v;
  // Each iteration scales by Q^{-10}; the sum over k is a geometric series.
  BigInt q10 = big_pow(Q, 10);
  out.grand_total_all_k = out.grand_total_k0 * Rational(q10, q10 - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Exact enumeration over residue classes.
// ---------------------------------------------------------------------------
struct DensityReport {
  FormTag form = FormTag::G1;
  int Q = 0;
  int max_depth = 0;
  int depth = 0;  // deepest level fully processed
  std::map<DensityKey, Rational> decided;
  Rational undecided = 1;
  long long class_budget_used = 0;
  bool budget_exhausted = false;
  /// Undecided mass after each depth (index d = mass left after depth d).
  std::vector<Rational> undecided_by_depth;
  /// Mass of final undecided classes whose known discriminant digits are all zero.
  Rational singular_like = 0;

  Rational decided_mass(const DensityKey& k) const {
    auto it = decided.find(k);
    return it == decided.end() ? Rational(0) : it->second;
  }
  Rational total() const {
    Rational s = undecided;
    for (const auto& [k, v] : decided) s += v;
    return s;
  }
};

struct EnumerateOptions {
  int max_depth = 10;
  long long class_budget = 50'000'000;
  int workers = 1;
  TateOptions tate;
};

namespace detail {

struct LevelResult {
  std::map<DensityKey, std::uint64_t> decided;
  std::vector<Code> next;  // undecided children, packed
  std::uint64_t undecided = 0;
  std::uint64_t singular_like = 0;
};

}  // namespace detail

/// Breadth-wise refinement: every class at depth d is a prefix of d digits for
/// each free coefficient.  Undecided classes split into Q^c children.
inline DensityReport enumerate_exact(FormTag form, const Field& field, const EnumerateOptions& opt = {}) {
  check_form_characteristic(form, field->p());
  const FiniteField* F = field.get();
  const int Q = F->q();
  const int c = free_coefficients(form);
  const std::vector<int> idx = free_indices(form);
  long long children_per_class = 1;
  for (int i = 0; i < c; ++i) children_per_class *= Q;

  DensityReport rep;
  rep.form = form;
  rep.Q = Q;
  rep.max_depth = opt.max_depth;
  rep.undecided_by_depth.push_back(Rational(1));

  std::map<DensityKey, std::vector<std::uint64_t>> counts;  // key -> count per depth
  std::vector<Code> frontier;                               // packed classes at depth d-1
  std::uint64_t frontier_size = 1;                          // the root class
  std::uint64_t final_singular = 0;
  int final_depth = 0;

  for (int d = 1; d <= opt.max_depth; ++d) {
    long long needed = static_cast<long long>(frontier_size) * children_per_class;
    if (rep.class_budget_used + needed > opt.class_budget) {
      rep.budget_exhausted = true;
      break;
    }
    const int parent_stride = c * (d - 1);
    const int child_stride = c * d;
    const bool last = d == opt.max_depth;
    std::size_t chunks = std::min<std::uint64_t>(frontier_size, static_cast<std::uint64_t>(std::max(1, opt.workers)) * 16);
    std::vector<detail::LevelResult> results(chunks);
    parallel_chunks(chunks, opt.workers, [&](std::size_t chunk) {
      auto& out = results[chunk];
      std::uint64_t begin = frontier_size * chunk / chunks, end = frontier_size * (chunk + 1) / chunks;
      std::vector<Code> child(child_stride);
      std::vector<Code> digit(c, 0);
      std::array<PadicElem, 5> coeffs;
      for (std::uint64_t parent = begin; parent < end; ++parent) {
        const Code* pd = frontier.data() + parent * parent_stride;
        for (int j = 0; j < c; ++j)
          std::copy(pd + j * (d - 1), pd + (j + 1) * (d - 1), child.begin() + j * d);
        for (long long ch = 0; ch < children_per_class; ++ch) {
          long long v = ch;
          for (int j = 0; j < c; ++j, v /= Q) child[j * d + d - 1] = static_cast<Code>(v % Q);
          for (auto& a : coeffs) a = PadicElem::zero(F);
          for (int j = 0; j < c; ++j) coeffs[idx[j]] = PadicElem::class_of(F, child.data() + j * d, d);
          WeierstrassCurve E(field, coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]);
          TateOutcome o = run_tate(E, opt.tate);
          if (auto dec = std::get_if<Decided>(&o)) {
            ++out.decided[key_of(*dec)];
          } else {
            ++out.undecided;
            if (last) {
              if (discriminant(E).val().kind == Valuation::AtLeast) ++out.singular_like;
            } else {
              out.next.insert(out.next.end(), child.begin(), child.end());
            }
          }
        }
      }
    });
    rep.class_budget_used += needed;
    std::vector<Code> next;
    std::uint64_t undecided = 0;
    for (auto& r : results) {
      for (const auto& [k, n] : r.decided) {
        auto& v = counts[k];
        if (static_cast<int>(v.size()) <= d) v.resize(d + 1, 0);
        v[d] += n;
      }
      undecided += r.undecided;
      final_singular += r.singular_like;
      if (!last) next.insert(next.end(), r.next.begin(), r.next.end());
      r = {};
    }
    frontier = std::move(next);
    frontier_size = undecided;
    final_depth = d;
    rep.undecided_by_depth.push_back(Rational(BigInt(undecided), big_pow(Q, static_cast<long long>(c) * d)));
    if (undecided == 0) break;
  }

  rep.depth = final_depth;
  for (const auto& [k, v] : counts) {
    Rational m = 0;
    for (std::size_t d = 1; d < v.size(); ++d)
      if (v[d]) m += Rational(BigInt(v[d]), big_pow(Q, static_cast<long long>(c) * d));
    rep.decided[k] = m;
  }
  rep.undecided = rep.undecided_by_depth.back();
  rep.singular_like = Rational(BigInt(final_singular), big_pow(Q, static_cast<long long>(c) * final_depth));
  return rep;
}

// ---------------------------------------------------------------------------
// Table comparison.
// ---------------------------------------------------------------------------
enum class Verdict { Pass, Fail, Skip };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skip: return "skip";
  }
  return "?";
}

struct TableVerdict {
  DensityKey key;
  Rational closed;
  Rational decided;
  Verdict verdict;
};

/// closed in [decided, decided + undecided] passes.  A key with no decided
/// mass whose closed form fits inside the undecided mass is skipped.
inline std::vector<TableVerdict> compare_table(const DensityReport& rep, int max_n = 8, int max_k = 1) {
  std::vector<DensityKey> keys = table_keys(max_n, max_k);
  for (const auto& [k, v] : rep.decided)
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  std::vector<TableVerdict> out;
  for (const auto& k : keys) {
    const Rational zero(0);
    Rational closed = admissible(k) ? closed_form(rep.Q, k) : Rational(-1);
    Rational dec = rep.decided_mass(k);
    Verdict v;
    if (closed < zero)
      v = Verdict::Fail;
    else if (dec == zero && closed <= rep.undecided)
      v = Verdict::Skip;
    else
      v = (dec <= closed && closed <= dec + rep.undecided) ? Verdict::Pass : Verdict::Fail;
    out.push_back({k, closed < zero ? zero : closed, dec, v});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo.
// ---------------------------------------------------------------------------
namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: sample i's digits depend only on (seed, i).
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    state_ = a ^ (index * 0xD1B54A32D192ED03ULL);
    splitmix64(state_);
  }
  Code uniform(int q) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(q);
    for (;;) {
      std::uint64_t x = splitmix64(state_);
      if (x < limit) return static_cast<Code>(x % static_cast<std::uint64_t>(q));
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace detail

struct McEntry {
  std::uint64_t hits = 0;
  double estimate = 0;
  double std_error = 0;
};

struct McReport {
  FormTag form = FormTag::G1;
  int Q = 0;
  std::uint64_t samples = 0;
  int tail_depth = 0;
  std::uint64_t seed = 0;
  std::map<DensityKey, McEntry> entries;
  std::uint64_t unresolved = 0;

  /// Fraction of samples whose decided outcome has at least `k` iterations.
  McEntry iterations_at_least(int k) const {
    McEntry e;
    for (const auto& [key, v] : entries)
      if (key.iterations >= k) e.hits += v.hits;
    finish(e);
    return e;
  }
  void finish(McEntry& e) const {
    if (samples == 0) return;
    e.estimate = static_cast<double>(e.hits) / static_cast<double>(samples);
    e.std_error = std::sqrt(e.estimate * (1 - e.estimate) / static_cast<double>(samples));
  }
};

struct McOptions {
  std::uint64_t samples = 100'000;
  int tail_depth = 16;
  std::uint64_t seed = 1;
  int workers = 1;
  TateOptions tate;
};

inline McReport estimate_mc(FormTag form, const Field& field, const McOptions& opt = {}) {
  check_form_characteristic(form, field->p());
  const FiniteField* F = field.get();
  const int Q = F->q();
  const std::vector<int> idx = free_indices(form);
  McReport rep;
  rep.form = form;
  rep.Q = Q;
  rep.samples = opt.samples;
  rep.tail_depth = opt.tail_depth;
  rep.seed = opt.seed;
  if (opt.samples == 0) return rep;

  struct Partial {
    std::map<DensityKey, std::uint64_t> hits;
    std::uint64_t unresolved = 0;
  };
  constexpr std::uint64_t kChunk = 1 << 14;
  std::size_t chunks = static_cast<std::size_t>((opt.samples + kChunk - 1) / kChunk);
  std::vector<Partial> parts(chunks);
  parallel_chunks(chunks, opt.workers, [&](std::size_t chunk) {
    auto& out = parts[chunk];
    std::uint64_t begin = chunk * kChunk, end = std::min(opt.samples, begin + kChunk);
    Digits digits(opt.tail_depth);
    for (std::uint64_t i = begin; i < end; ++i) {
      detail::SampleStream rng(opt.seed, i);
      std::array<PadicElem, 5> a;
      for (auto& x : a) x = PadicElem::zero(F);
      for (int j : idx) {
        for (auto& d : digits) d = rng.uniform(Q);
        a[j] = PadicElem::class_of(F, digits);
      }
      WeierstrassCurve E(field, a[0], a[1], a[2], a[3], a[4]);
      TateOutcome o = run_tate(E, opt.tate);
      if (auto dec = std::get_if<Decided>(&o))
        ++out.hits[key_of(*dec)];
      else
        ++out.unresolved;
    }
  });
  for (const auto& part : parts) {
    for (const auto& [k, h] : part.hits) rep.entries[k].hits += h;
    rep.unresolved += part.unresolved;
  }
  for (auto& [k, e] : rep.entries) rep.finish(e);
  return rep;
}

// ---------------------------------------------------------------------------
// Pushforward uniformity of the reduction maps.
// ---------------------------------------------------------------------------
struct UniformityReport {
  int Q = 0;
  int depth = 0;
  FormTag form = FormTag::G1;
  std::uint64_t inputs = 0;
  std::uint64_t reduced_classes = 0;
  Rational max_deviation = 0;
};

/// Pushes every long-form class mod π^depth through the reduction map and
/// measures how far the image distribution is from uniform.
inline UniformityReport pushforward_uniformity(const Field& field, int depth, long long budget = 20'000'000) {
  const FiniteField* F = field.get();
  const int Q = F->q();
  FormTag form = form_for_characteristic(F->p());
  std::vector<int> out_idx = free_indices(form);
  long double inputs_ld = std::pow(static_cast<long double>(Q), 5.0L * depth);
  if (inputs_ld > static_cast<long double>(budget)) fail(ErrorKind::BudgetExceeded, "too many input classes");
  std::uint64_t inputs = static_cast<std::uint64_t>(inputs_ld + 0.5L);
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < out_idx.size() * depth; ++i) cells *= Q;
  std::vector<std::uint64_t> hist(cells, 0);
  Digits dig(depth);
  for (std::uint64_t x = 0; x < inputs; ++x) {
    std::uint64_t v = x;
    std::array<PadicElem, 5> a;
    for (auto& coef : a) {
      for (auto& d : dig) {
        d = static_cast<Code>(v % Q);
        v /= Q;
      }
      coef = PadicElem::exact_digits(F, dig);
    }
    ReducedForm R = reduce_form(WeierstrassCurve(field, a[0], a[1], a[2], a[3], a[4]));
    std::uint64_t cell = 0;
    for (int j : out_idx) {
      const PadicElem& c = R.curve.coeffs()[j];
      for (int i = 0; i < depth; ++i) cell = cell * Q + c.digit(i);
    }
    ++hist[cell];
  }
  UniformityReport rep;
  rep.Q = Q;
  rep.depth = depth;
  rep.form = form;
  rep.inputs = inputs;
  rep.reduced_classes = cells;
  Rational uniform(BigInt(1), BigInt(cells));
  for (std::uint64_t h : hist) {
    Rational dev = Rational(BigInt(h), BigInt(inputs)) - uniform;
    if (dev < Rational(0)) dev = -dev;
    if (dev > rep.max_deviation) rep.max_deviation = dev;
  }
  return rep;
}

}  // namespace kodaira
