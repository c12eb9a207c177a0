#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linnik {

enum class ErrorCode {
  InvalidInput,
  InvalidParams,
  InvalidConfig,
  NonConvergence,
  PoleError,
  NoSignChange,
  OutOfDomain,
  MomentDoesNotExist,
  ZeroObservation,
  TooFewObservations,
  VarianceTooSmall,
  SolverFailed,
  DegenerateLambdas,
  ChfOutOfRange,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::PoleError: return "PoleError";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::MomentDoesNotExist: return "MomentDoesNotExist";
    case ErrorCode::ZeroObservation: return "ZeroObservation";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::VarianceTooSmall: return "VarianceTooSmall";
    case ErrorCode::SolverFailed: return "SolverFailed";
    case ErrorCode::DegenerateLambdas: return "DegenerateLambdas";
    case ErrorCode::ChfOutOfRange: return "ChfOutOfRange";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code name so CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }

 private:
  ErrorCode code_;
};

}  // namespace linnik
