#include "heavynet/errors.hpp"

namespace heavynet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kDisconnected: return "disconnected";
    case ErrorCode::kThresholdExceeded: return "threshold-exceeded";
    case ErrorCode::kNonConvergence: return "non-convergence";
    case ErrorCode::kBoundaryFailure: return "boundary-failure";
    case ErrorCode::kNearDegenerate: return "near-degenerate";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kScaleTooSmall: return "scale-too-small";
    case ErrorCode::kSingularSystem: return "singular-system";
    case ErrorCode::kResampleBudget: return "resample-budget";
    case ErrorCode::kSizeTooLarge: return "size-too-large";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace heavynet
