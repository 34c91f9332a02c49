#include "qcorr/errors.hpp"

namespace qcorr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotUnitTrace: return "NotUnitTrace";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MissingDims: return "MissingDims";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BadParamLength: return "BadParamLength";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::BadRank: return "BadRank";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownFamily: return "UnknownFamily";
  }
  return "Unknown";
}

}  // namespace qcorr
