#pragma once

#include <cstdint>

#include "qcorr/densop.hpp"

// Brute-force references used to cross-check the optimizers. Spectra here
// come from Eigen's SelfAdjointEigenSolver, not from hermitian_eig, so the
// two routes stay independent.
namespace qcorr::oracle {

struct GridSpec {
  std::size_t n_theta = 181;  // theta in [0, pi], endpoints included
  std::size_t n_phi = 360;    // phi in [0, 2 pi), endpoint excluded
};

/// Minimum of the qubit discord objective over the (theta, phi) grid of
/// measurement bases {cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, complement}.
/// An upper bound on the discord, in bits.
double grid_discord_qubit(const DensityMatrix& rho, const GridSpec& grid = {});

struct BellMixtureValues {
  double deficit;
  double discord;
  double quantumness;
  double ere;
  double mutual_info;
};

/// Closed forms for p|phi+><phi+| + (1-p)|phi-><phi-| in bits: every
/// quantum measure is 1 - H2(p), mutual information is 2 - H2(p).
BellMixtureValues bell_mixture_closed_forms(double p);

double binary_entropy(double p);

/// G G^dagger / Tr(G G^dagger) with G a seeded complex Gaussian
/// (dim_a dim_b) x rank matrix.
DensityMatrix random_state(std::uint64_t seed, BipartiteDims dims, std::size_t rank);

/// A seeded random k-term separable ansatz mapped to its state.
DensityMatrix random_separable(std::uint64_t seed, BipartiteDims dims, std::size_t k);

/// Haar-random unitary (QR of a complex Gaussian, phases fixed).
ComplexMatrix random_unitary(std::uint64_t seed, std::size_t dim);

}  // namespace qcorr::oracle
