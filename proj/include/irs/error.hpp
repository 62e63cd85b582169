#pragma once

#include <stdexcept>
#include <string>

namespace irs {

enum class ErrorCode {
  InvalidInput,
  NotPSD,
  NumericalFailure,
  Infeasible,
  RecoveryFailed,
  PhaseStepInfeasible,
  GridTooLarge,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::RecoveryFailed: return "RecoveryFailed";
    case ErrorCode::PhaseStepInfeasible: return "PhaseStepInfeasible";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace irs
