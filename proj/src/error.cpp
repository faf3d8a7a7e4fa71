#include "qviab/error.hpp"

namespace qviab {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kBadSubset: return "BadSubset";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kNegativeSingle: return "NegativeSingle";
    case ErrorCode::kBadPartition: return "BadPartition";
    case ErrorCode::kSpaceMismatch: return "SpaceMismatch";
    case ErrorCode::kNotBinary: return "NotBinary";
    case ErrorCode::kBadIndex: return "BadIndex";
    case ErrorCode::kMissingCoefficient: return "MissingCoefficient";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kInconsistentTargets: return "InconsistentTargets";
    case ErrorCode::kNotUnit: return "NotUnit";
    case ErrorCode::kBadSign: return "BadSign";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotProjector: return "NotProjector";
    case ErrorCode::kNotDensity: return "NotDensity";
    case ErrorCode::kNonPositiveSpecifiedMarginal: return "NonPositiveSpecifiedMarginal";
    case ErrorCode::kComponentInfeasible: return "ComponentInfeasible";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

}  // namespace qviab
