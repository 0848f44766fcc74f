#pragma once

#include <stdexcept>
#include <string>

namespace gtds {

enum class ErrorCode {
  InvalidArgument = 1,
  ParseError,
  MixedFields,
  DivisionByZero,
  OddPrimeRequired,
  ArityMismatch,
  NotAPermutation,
  DuplicateAbscissa,
  DomainTooLarge,
  GiHasZero,
  VariableOutOfScope,
  SingularMatrix,
  KeyShapeMismatch,
  WeightSumNonzero,
  BadM,
  BadExponent,
  DiscriminantResidue,
  DegreeTooLow,
  HypothesisUnverified,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace gtds
