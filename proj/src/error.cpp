#include "gtds/error.hpp"

namespace gtds {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MixedFields: return "MixedFields";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::OddPrimeRequired: return "OddPrimeRequired";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::NotAPermutation: return "NotAPermutation";
    case ErrorCode::DuplicateAbscissa: return "DuplicateAbscissa";
    case ErrorCode::DomainTooLarge: return "DomainTooLarge";
    case ErrorCode::GiHasZero: return "GiHasZero";
    case ErrorCode::VariableOutOfScope: return "VariableOutOfScope";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::KeyShapeMismatch: return "KeyShapeMismatch";
    case ErrorCode::WeightSumNonzero: return "WeightSumNonzero";
    case ErrorCode::BadM: return "BadM";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::DiscriminantResidue: return "DiscriminantResidue";
    case ErrorCode::DegreeTooLow: return "DegreeTooLow";
    case ErrorCode::HypothesisUnverified: return "HypothesisUnverified";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gtds
