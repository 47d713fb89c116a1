#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace g2k {

enum class ErrorCode {
  FieldMismatch,
  DivisionByZero,
  UnsupportedField,
  NoSolutionCertificate,
  InvalidFieldSpec,
  LengthMismatch,
  CharacteristicTwo,
  RootsNotRational,
  NormalFormNeedsExtension,
  SingularCurve,
  DegreeOverflow,
  ExhaustedRetries,
  NoRationalWeierstrassPoint,
  NonGenericDivisor,
  UnsupportedDivisor,
  TwoTorsionK2Zero,
  FormulaSetMissing,
  KernelDimensionUnexpected,
  NotInSubfield,
  CrossCheckFailed,
  ZeroOutput,
  AllPivotsFailed,
  CounterexampleFound,
  SuiteFailed,
  ParseError,
  FingerprintMismatch,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::NoSolutionCertificate: return "NoSolutionCertificate";
    case ErrorCode::InvalidFieldSpec: return "InvalidFieldSpec";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::CharacteristicTwo: return "CharacteristicTwo";
    case ErrorCode::RootsNotRational: return "RootsNotRational";
    case ErrorCode::NormalFormNeedsExtension: return "NormalFormNeedsExtension";
    case ErrorCode::SingularCurve: return "SingularCurve";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::ExhaustedRetries: return "ExhaustedRetries";
    case ErrorCode::NoRationalWeierstrassPoint: return "NoRationalWeierstrassPoint";
    case ErrorCode::NonGenericDivisor: return "NonGenericDivisor";
    case ErrorCode::UnsupportedDivisor: return "UnsupportedDivisor";
    case ErrorCode::TwoTorsionK2Zero: return "TwoTorsionK2Zero";
    case ErrorCode::FormulaSetMissing: return "FormulaSetMissing";
    case ErrorCode::KernelDimensionUnexpected: return "KernelDimensionUnexpected";
    case ErrorCode::NotInSubfield: return "NotInSubfield";
    case ErrorCode::CrossCheckFailed: return "CrossCheckFailed";
    case ErrorCode::ZeroOutput: return "ZeroOutput";
    case ErrorCode::AllPivotsFailed: return "AllPivotsFailed";
    case ErrorCode::CounterexampleFound: return "CounterexampleFound";
    case ErrorCode::SuiteFailed: return "SuiteFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
  }
  return "Unknown";
}

/// Every library failure is reported through this exception; `code()` is
/// stable and is what tests and the CLI dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace g2k
