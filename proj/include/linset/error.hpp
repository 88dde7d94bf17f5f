#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linset {

enum class ErrorCode {
  NonPrime,
  ReduciblePolynomial,
  DegreeMismatch,
  NotADivisor,
  AmbientMismatch,
  TooLarge,
  ConstraintInfeasible,
  ZeroSubspace,
  NonPowerCount,
  BudgetExceeded,
  AlphaInGroundField,
  NotInSigma,
  DegenerateScene,
  InvalidParams,
  PiNotDisjoint,
  NotDisjoint,
  NotCollinearInPi,
  InfeasibleScope,
  UnknownSuite,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Domain error raised by every module; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPrime: return "NonPrime";
    case ErrorCode::ReduciblePolynomial: return "ReduciblePolynomial";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::NotADivisor: return "NotADivisor";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ConstraintInfeasible: return "ConstraintInfeasible";
    case ErrorCode::ZeroSubspace: return "ZeroSubspace";
    case ErrorCode::NonPowerCount: return "NonPowerCount";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::AlphaInGroundField: return "AlphaInGroundField";
    case ErrorCode::NotInSigma: return "NotInSigma";
    case ErrorCode::DegenerateScene: return "DegenerateScene";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::PiNotDisjoint: return "PiNotDisjoint";
    case ErrorCode::NotDisjoint: return "NotDisjoint";
    case ErrorCode::NotCollinearInPi: return "NotCollinearInPi";
    case ErrorCode::InfeasibleScope: return "InfeasibleScope";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace linset
