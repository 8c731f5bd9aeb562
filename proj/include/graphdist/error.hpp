#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphdist {

enum class ErrorCode {
  kDuplicateId,
  kSelfLoop,
  kDegenerateEdge,
  kNonFinite,
  kUnknownVertex,
  kDuplicateEdge,
  kNotPlane,
  kNotConnected,
  kHasDegreeOne,
  kModeMismatch,
  kStrategyInapplicable,
  kBudgetExceeded,
  kPreconditionViolated,
  kNoBranchVertex,
  kWitnessUnavailable,
  kMalformedMapping,
  kUndecidable,
  kUnsupportedGeometry,
  kEmptyInput,
  kParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kDegenerateEdge: return "DegenerateEdge";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kUnknownVertex: return "UnknownVertex";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kNotPlane: return "NotPlane";
    case ErrorCode::kNotConnected: return "NotConnected";
    case ErrorCode::kHasDegreeOne: return "HasDegreeOne";
    case ErrorCode::kModeMismatch: return "ModeMismatch";
    case ErrorCode::kStrategyInapplicable: return "StrategyInapplicable";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kNoBranchVertex: return "NoBranchVertex";
    case ErrorCode::kWitnessUnavailable: return "WitnessUnavailable";
    case ErrorCode::kMalformedMapping: return "MalformedMapping";
    case ErrorCode::kUndecidable: return "Undecidable";
    case ErrorCode::kUnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace graphdist
