#include "wasserlim/error.hpp"

namespace wasserlim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::NegativeDistance: return "NegativeDistance";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::EmptyTruncation: return "EmptyTruncation";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::QuantizationBudgetExceeded: return "QuantizationBudgetExceeded";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::NotUniformCloud: return "NotUniformCloud";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NoGeodesicStructure: return "NoGeodesicStructure";
    case ErrorCode::InfiniteEntropy: return "InfiniteEntropy";
    case ErrorCode::NoValidPairs: return "NoValidPairs";
    case ErrorCode::NonpositiveK: return "NonpositiveK";
    case ErrorCode::AbsoluteContinuityFailure: return "AbsoluteContinuityFailure";
    case ErrorCode::FamilyLengthMismatch: return "FamilyLengthMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

}  // namespace wasserlim
