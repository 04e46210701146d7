#include "htype/errors.hpp"

namespace htype {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SpecNotRealizable: return "SpecNotRealizable";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ZeroCovector: return "ZeroCovector";
    case ErrorCode::CutLocusTarget: return "CutLocusTarget";
    case ErrorCode::IdentityTarget: return "IdentityTarget";
    case ErrorCode::NoCandidateFound: return "NoCandidateFound";
    case ErrorCode::UnsupportedPositiveK: return "UnsupportedPositiveK";
    case ErrorCode::BoxOutsideDomain: return "BoxOutsideDomain";
    case ErrorCode::WitnessNotFound: return "WitnessNotFound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

}  // namespace htype
