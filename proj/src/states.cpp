#include "qcorr/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr::states {

namespace {

constexpr BipartiteDims kQubits{2, 2};

void require_probability(double p, const char* family) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::OutOfRange,
                std::string(family) + ": p must lie in [0, 1], got " + std::to_string(p), p);
  }
}

// |v><v| / <v|v> for an unnormalized ket with small integer entries; every
// entry is then exact in binary floating point.
ComplexMatrix exact_projector(const ComplexVector& v) { return projector(v) / v.squaredNorm(); }

ComplexVector e(Eigen::Index i) { return ComplexVector::Unit(4, i); }

}  // namespace

ComplexVector ket0() { return ComplexVector::Unit(2, 0); }
ComplexVector ket1() { return ComplexVector::Unit(2, 1); }
ComplexVector ket_plus() { return (ket0() + ket1()) * std::numbers::sqrt2 / 2.0; }
ComplexVector ket_minus() { return (ket0() - ket1()) * std::numbers::sqrt2 / 2.0; }

DensityMatrix pure_state(const ComplexVector& ket, BipartiteDims dims) {
  return validate_density(projector(ket.normalized()), dims);
}

DensityMatrix bell_mixture(double p) {
  require_probability(p, "bell_mixture");
  return validate_density(
      p * exact_projector(e(0) + e(3)) + (1.0 - p) * exact_projector(e(0) - e(3)), kQubits);
}

DensityMatrix nonorthogonal_sep(double p) {
  require_probability(p, "nonorthogonal_sep");
  return validate_density(
      p * exact_projector(e(0)) + (1.0 - p) * exact_projector(ComplexVector::Ones(4)), kQubits);
}

DensityMatrix werner(double p) {
  require_probability(p, "werner");
  return validate_density(
      p * exact_projector(e(1) - e(2)) + (1.0 - p) * 0.25 * ComplexMatrix::Identity(4, 4), kQubits);
}

DensityMatrix pure_bell() { return bell_mixture(1.0); }

}  // namespace qcorr::states
