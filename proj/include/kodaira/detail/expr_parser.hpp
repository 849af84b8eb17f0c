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

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "kodaira/error.hpp"

namespace kodaira::detail {

// Recursive-descent parser for the small polynomial grammar shared by field
// elements, local ring elements and polynomials in t:
//
//   expr  := ['-'] term (('+' | '-') term)*
//   term  := power ('*' power)*
//   power := atom ['^' ['-'] integer]
//   atom  := integer | name | name '(' expr ')' | '(' expr ')'
//
// The algebra supplies the value type and the meaning of names and calls.
// Required members:
//   using Value = ...;
//   Value integer(long long v, std::size_t pos);
//   Value name(std::string_view id, std::size_t pos);
//   Value call(std::string_view id, Value arg, std::size_t pos);
//   Value add(Value, Value, std::size_t pos);
//   Value sub(Value, Value, std::size_t pos);
//   Value mul(Value, Value, std::size_t pos);
//   Value neg(Value, std::size_t pos);
//   Value pow(Value, long long exponent, std::size_t pos);
template <class Algebra>
class ExprParser {
 public:
  using Value = typename Algebra::Value;

  ExprParser(std::string_view text, Algebra& algebra) : text_(text), alg_(algebra) {}

  Value parse_all() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "empty expression");
    Value v = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(pos_, std::string("expected '") + c + "'");
  }

  Value expr() {
    skip_ws();
    std::size_t start = pos_;
    bool negate = accept('-');
    Value v = term();
    if (negate) v = alg_.neg(std::move(v), start);
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('+')) {
        v = alg_.add(std::move(v), term(), at);
      } else if (accept('-')) {
        v = alg_.sub(std::move(v), term(), at);
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = power();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (!accept('*')) return v;
      v = alg_.mul(std::move(v), power(), at);
    }
  }

  Value power() {
    Value base = atom();
    skip_ws();
    std::size_t at = pos_;
    if (!accept('^')) return base;
    skip_ws();
    bool negative = accept('-');
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError(pos_, "expected integer exponent");
    long long e = integer_literal();
    return alg_.pow(std::move(base), negative ? -e : e, at);
  }

  long long integer_literal() {
    long long v = 0;
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (1LL << 50)) throw ParseError(start, "integer literal too large");
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  Value atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
    std::size_t start = pos_;
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return alg_.integer(integer_literal(), start);
    if (c == '(') {
      ++pos_;
      Value v = expr();
      expect(')');
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view id = text_.substr(start, pos_ - start);
      if (accept('(')) {
        Value arg = expr();
        expect(')');
        return alg_.call(id, std::move(arg), start);
      }
      return alg_.name(id, start);
    }
    throw ParseError(pos_, "unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  Algebra& alg_;
  std::size_t pos_ = 0;
};

template <class Algebra>
typename Algebra::Value parse_expression(std::string_view text, Algebra& algebra) {
  return ExprParser<Algebra>(text, algebra).parse_all();
}

}  // namespace kodaira::detail
