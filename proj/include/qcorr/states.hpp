#pragma once

#include "qcorr/densop.hpp"

// Named two-qubit state families. Kets are A-major: |ab> = |a> (x) |b>.
namespace qcorr::states {

ComplexVector ket0();
ComplexVector ket1();
ComplexVector ket_plus();   // (|0> + |1>)/sqrt(2)
ComplexVector ket_minus();  // (|0> - |1>)/sqrt(2)

DensityMatrix pure_state(const ComplexVector& ket, BipartiteDims dims);

/// p |phi+><phi+| + (1-p) |phi-><phi-|, |phi+-> = (|00> +- |11>)/sqrt(2).
DensityMatrix bell_mixture(double p);

/// p |00><00| + (1-p) |++><++|.
DensityMatrix nonorthogonal_sep(double p);

/// p |psi-><psi-| + (1-p) I/4.
DensityMatrix werner(double p);

/// |phi+><phi+|.
DensityMatrix pure_bell();

}  // namespace qcorr::states
