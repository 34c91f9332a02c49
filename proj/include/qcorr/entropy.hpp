#pragma once

#include <limits>
#include <span>

#include "qcorr/densop.hpp"
#include "qcorr/tolerances.hpp"

namespace qcorr {

enum class LogBase { Bits, Nats };

/// An entropy-like quantity. Relative entropies can be +inf when the
/// support condition fails; that is a value, not an error.
struct EntropyValue {
  double value = 0.0;
  bool finite = true;

  static EntropyValue infinite() {
    return {std::numeric_limits<double>::infinity(), false};
  }
};

/// Converts a quantity measured in nats to the requested base.
double from_nats(double nats, LogBase base) noexcept;

/// -sum p log p over the entries of a probability vector, 0 log 0 = 0.
double shannon_entropy(std::span<const double> probabilities, LogBase base = LogBase::Bits);

/// Entropy of a spectrum; nonpositive entries contribute nothing.
double spectrum_entropy(std::span<const double> eigenvalues, LogBase base = LogBase::Bits);

EntropyValue von_neumann_entropy(const DensityMatrix& rho, LogBase base = LogBase::Bits);

/// S(rho||sigma) = Tr[rho log rho] - Tr[rho log sigma]. Returns +inf when
/// rho has weight above 1e-10 outside the support of sigma.
EntropyValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                              LogBase base = LogBase::Bits);

/// Same functional with sigma's eigenvalues floored at eps (then
/// renormalized); always finite.
EntropyValue relative_entropy_floored(const DensityMatrix& rho, const DensityMatrix& sigma,
                                      double eps = tol::floor_eps,
                                      LogBase base = LogBase::Bits);

/// Caches Tr[rho log rho] for repeated evaluation against many sigmas, as
/// the separable-state optimizers do. sigma is taken as a raw Hermitian
/// matrix of unit trace.
class RelativeEntropyFrom {
 public:
  explicit RelativeEntropyFrom(const DensityMatrix& rho);

  /// Floored relative entropy in nats.
  double floored_nats(const ComplexMatrix& sigma, double eps) const;
  /// Support-checked relative entropy in nats (+inf outside the support).
  double exact_nats(const ComplexMatrix& sigma) const;

  double negentropy_nats() const noexcept { return rho_log_rho_; }

 private:
  ComplexMatrix rho_;
  EigenDecomposition rho_eig_;
  double rho_log_rho_ = 0.0;
};

/// S(rho_AB || rho_A (x) rho_B), cross-checked against S(A)+S(B)-S(AB).
EntropyValue mutual_information(const DensityMatrix& rho, LogBase base = LogBase::Bits);

/// S(AB) - S(A); negative for some entangled states.
EntropyValue conditional_entropy_vn(const DensityMatrix& rho, LogBase base = LogBase::Bits);

}  // namespace qcorr
