#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace floquet {

/// Failure categories surfaced by the library. The CLI maps them onto exit codes.
enum class ErrorCode {
  InvalidArgument,
  NonFiniteState,
  StepUnderflow,
  NearDefective,
  AmbiguousMatch,
  DegeneracyUnresolved,
  Undersampled,
  NonClosed,
  OracleMismatch,
  OverlappingResonators,
  SingularAlpha,
  NotConverged,
  ConfigError,
  IoError,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NearDefective: return "NearDefective";
    case ErrorCode::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorCode::DegeneracyUnresolved: return "DegeneracyUnresolved";
    case ErrorCode::Undersampled: return "Undersampled";
    case ErrorCode::NonClosed: return "NonClosed";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::OverlappingResonators: return "OverlappingResonators";
    case ErrorCode::SingularAlpha: return "SingularAlpha";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace floquet
