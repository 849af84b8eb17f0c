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

#include <stdexcept>
#include <string>
#include <string_view>

namespace kodaira {

/// Every recoverable failure in the library carries one of these names.  The
/// CLI prints the name verbatim, so the spelling is part of the interface.
enum class ErrorKind {
  InvalidField,
  MixedFields,
  DivisionByZero,
  ZeroPolynomial,
  NotMonic,
  WrongDegree,
  InsufficientValuation,
  InsufficientPrecision,
  NotIntegral,
  ParseError,
  SingularCurve,
  IterationBudget,
  SearchBudgetExceeded,
  NotInReducedForm,
  InadmissibleKey,
  MismatchedCharacteristic,
  BudgetExceeded,
  UnsupportedField,
  EmptyS,
  InfinitePlace,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::MixedFields: return "MixedFields";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::NotMonic: return "NotMonic";
    case ErrorKind::WrongDegree: return "WrongDegree";
    case ErrorKind::InsufficientValuation: return "InsufficientValuation";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SingularCurve: return "SingularCurve";
    case ErrorKind::IterationBudget: return "IterationBudget";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::NotInReducedForm: return "NotInReducedForm";
    case ErrorKind::InadmissibleKey: return "InadmissibleKey";
    case ErrorKind::MismatchedCharacteristic: return "MismatchedCharacteristic";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::EmptyS: return "EmptyS";
    case ErrorKind::InfinitePlace: return "InfinitePlace";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

/// Parse failures remember the byte offset where the grammar broke.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorKind::ParseError, message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace kodaira
