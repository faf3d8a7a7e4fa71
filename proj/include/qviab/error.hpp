#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qviab {

enum class ErrorCode {
  kInvalidArgument = 1,
  kLengthMismatch,
  kNotNormalized,
  kBadSubset,
  kCapExceeded,
  kNegativeSingle,
  kBadPartition,
  kSpaceMismatch,
  kNotBinary,
  kBadIndex,
  kMissingCoefficient,
  kOutOfRange,
  kInconsistentTargets,
  kNotUnit,
  kBadSign,
  kDimMismatch,
  kNotHermitian,
  kNotProjector,
  kNotDensity,
  kNonPositiveSpecifiedMarginal,
  kComponentInfeasible,
  kParse,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// the C layer can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qviab
