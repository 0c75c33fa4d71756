#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mar {

enum class ErrorCode {
  kDuplicateId,
  kDanglingEndpoint,
  kUnreachableOd,
  kInvalidParameter,
  kNoPathFound,
  kDimensionMismatch,
  kInvalidAssignment,
  kNegativeFlow,
  kNegativeInput,
  kZeroCost,
  kTooLarge,
  kInvalidSigma,
  kUnsupportedCostKind,
  kZeroReference,
  kInvalidOrder,
  kSchemaError,
  kSemanticError,
  kInvalidSweepParameter,
  kIoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kDanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::kUnreachableOd: return "UnreachableOD";
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kNoPathFound: return "NoPathFound";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidAssignment: return "InvalidAssignment";
    case ErrorCode::kNegativeFlow: return "NegativeFlow";
    case ErrorCode::kNegativeInput: return "NegativeInput";
    case ErrorCode::kZeroCost: return "ZeroCost";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInvalidSigma: return "InvalidSigma";
    case ErrorCode::kUnsupportedCostKind: return "UnsupportedCostKind";
    case ErrorCode::kZeroReference: return "ZeroReference";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kSemanticError: return "SemanticError";
    case ErrorCode::kInvalidSweepParameter: return "InvalidSweepParameter";
    case ErrorCode::kIoError: return "IOError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to a structured exit report.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mar
