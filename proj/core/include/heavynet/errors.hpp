#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heavynet {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kDisconnected,
  kThresholdExceeded,
  kNonConvergence,
  kBoundaryFailure,
  kNearDegenerate,
  kInfeasible,
  kScaleTooSmall,
  kSingularSystem,
  kResampleBudget,
  kSizeTooLarge,
  kParse,
  kInternal,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace heavynet
