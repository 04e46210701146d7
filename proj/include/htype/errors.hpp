#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace htype {

enum class ErrorCode {
  SpecNotRealizable,
  InvalidSpec,
  DimensionMismatch,
  OutOfDomain,
  ZeroCovector,
  CutLocusTarget,
  IdentityTarget,
  NoCandidateFound,
  UnsupportedPositiveK,
  BoxOutsideDomain,
  WitnessNotFound,
  InvalidArgument,
  NumericalFailure,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every failure path carries one of the codes above
/// so callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace htype
