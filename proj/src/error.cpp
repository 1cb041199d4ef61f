#include "latfade/error.hpp"

namespace latfade {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnsupportedGroup: return "UnsupportedGroup";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::BadConductor: return "BadConductor";
    case ErrorKind::NotTotallyComplex: return "NotTotallyComplex";
    case ErrorKind::InconsistentDiscriminant: return "InconsistentDiscriminant";
    case ErrorKind::NormMismatch: return "NormMismatch";
    case ErrorKind::InvalidTrials: return "InvalidTrials";
    case ErrorKind::BlockMismatch: return "BlockMismatch";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::EmptySearch: return "EmptySearch";
    case ErrorKind::NonIntegerNorm: return "NonIntegerNorm";
    case ErrorKind::EmptyCode: return "EmptyCode";
    case ErrorKind::UncertifiedInvariant: return "UncertifiedInvariant";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Overflow:
    case ErrorKind::EmptySearch:
    case ErrorKind::NonIntegerNorm:
      return 3;
    case ErrorKind::EmptyCode:
    case ErrorKind::UncertifiedInvariant:
      return 4;
    default:
      return 2;
  }
}

}  // namespace latfade
