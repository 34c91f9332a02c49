#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcorr {

enum class ErrorKind {
  NotHermitian,
  NotUnitTrace,
  NotPositive,
  DimensionMismatch,
  MissingDims,
  NoConvergence,
  BadParamLength,
  RankDeficient,
  WrongDimension,
  OutOfRange,
  BadRank,
  InvalidConfig,
  InternalInconsistency,
  ParseError,
  UnknownFamily,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `magnitude` carries the offending
/// quantity (e.g. the Hermiticity defect) when one exists, else 0.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double magnitude = 0.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        magnitude_(magnitude) {}

  ErrorKind kind() const noexcept { return kind_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  ErrorKind kind_;
  double magnitude_;
};

}  // namespace qcorr
