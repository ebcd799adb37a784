#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wasserlim {

enum class ErrorCode {
  InvalidArgument,
  NotSquare,
  NonFinite,
  NonzeroDiagonal,
  Asymmetric,
  NegativeDistance,
  CoincidentPoints,
  TriangleViolation,
  EmptySubset,
  Disconnected,
  NonpositiveWeight,
  SpaceMismatch,
  EmptyTruncation,
  ZeroMass,
  QuantizationBudgetExceeded,
  SolverFailure,
  NotUniformCloud,
  SizeMismatch,
  TooLarge,
  NoGeodesicStructure,
  InfiniteEntropy,
  NoValidPairs,
  NonpositiveK,
  AbsoluteContinuityFailure,
  FamilyLengthMismatch,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// All domain failures surface as this exception; code() is what the CLI
// reports in its machine-readable error JSON.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }
  // The message without the leading error name.
  const std::string& message() const noexcept { return message_; }

private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace wasserlim
