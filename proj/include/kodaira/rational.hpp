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

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <string>

#include "kodaira/error.hpp"

namespace kodaira {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

inline BigInt big_pow(long long base, long long exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

/// Q^{-e} as an exact rational.
inline Rational inverse_power(long long q, long long exponent) { return Rational(BigInt(1), big_pow(q, exponent)); }

inline std::string to_string(const Rational& r) {
  return r.numerator().str() + "/" + r.denominator().str();
}

inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw ParseError(0, "malformed rational '" + text + "'");
  }
}

inline long double to_long_double(const Rational& r) {
  return r.numerator().convert_to<long double>() / r.denominator().convert_to<long double>();
}

/// True iff den is a power of q (including q^0 = 1).
inline bool is_power_of(BigInt den, long long q) {
  if (den <= 0) return false;
  while (den > 1) {
    if (den % q != 0) return false;
    den /= q;
  }
  return true;
}

}  // namespace kodaira
