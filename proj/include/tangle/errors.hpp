#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tangle {

enum class ErrorCode {
  UnknownParent,
  UnknownTransaction,
  ConflictViolation,
  NoChildren,
  ConflictRetriesExhausted,
  NotEIota,
  ConfigInvalid,
  InvalidPower,
  TargetNotConfirmed,
  IoFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::UnknownTransaction: return "UnknownTransaction";
    case ErrorCode::ConflictViolation: return "ConflictViolation";
    case ErrorCode::NoChildren: return "NoChildren";
    case ErrorCode::ConflictRetriesExhausted: return "ConflictRetriesExhausted";
    case ErrorCode::NotEIota: return "NotEIota";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::InvalidPower: return "InvalidPower";
    case ErrorCode::TargetNotConfirmed: return "TargetNotConfirmed";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` tells callers which
/// contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tangle
