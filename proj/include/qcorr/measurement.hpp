#pragma once

#include <span>
#include <vector>

#include "qcorr/densop.hpp"
#include "qcorr/entropy.hpp"

namespace qcorr {

/// Complete set of orthogonal rank-1 projectors on subsystem A, stored as
/// the orthonormal kets spanning them.
struct ProjectiveMeasurement {
  std::vector<ComplexVector> basis;

  std::size_t dim() const noexcept { return basis.size(); }
  std::vector<ComplexMatrix> projectors() const;
};

/// Rank-1 POVM on subsystem A with elements E_i = k_i k_i^dagger.
struct RankOnePOVM {
  std::vector<ComplexVector> kraus_vectors;

  std::size_t dim() const noexcept {
    return kraus_vectors.empty() ? 0 : static_cast<std::size_t>(kraus_vectors.front().size());
  }
  std::size_t outcomes() const noexcept { return kraus_vectors.size(); }
  std::vector<ComplexMatrix> elements() const;
};

struct MeasurementOutcome {
  double probability = 0.0;
  DensityMatrix conditional_state;  // on AB
  DensityMatrix conditional_b;      // Tr_A of conditional_state
  bool degenerate = false;          // probability below 1e-12, states are placeholders
};

struct MeasurementResult {
  std::vector<MeasurementOutcome> outcomes;
  DensityMatrix post_state;
};

/// Number of real parameters for a dim-dimensional projective basis.
std::size_t projective_param_count(std::size_t dim);

/// Orthonormal basis U = G(0,1) G(0,2) ... G(d-2,d-1) built from complex
/// Givens rotations, two angles (theta, phi) per index pair. For a qubit,
/// (theta, phi) gives {cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, its complement}.
/// All-zero parameters give the computational basis.
ProjectiveMeasurement projectors_from_params(std::size_t dim_a, std::span<const double> params);

/// Retracts the m x dim_a seed onto the POVM manifold: K <- K (K^dagger K)^{-1/2}.
/// Row i of the retracted matrix is the bra <k_i|.
RankOnePOVM povm_from_params(std::size_t dim_a, std::size_t m, const ComplexMatrix& raw);

/// Same, reading the seed as 2*m*dim_a reals (real parts then imaginary
/// parts, row-major).
RankOnePOVM povm_from_params(std::size_t dim_a, std::size_t m, std::span<const double> params);

/// Throws unless the invariants of the scheme hold within 1e-9.
void check_measurement(const ProjectiveMeasurement& scheme);
void check_measurement(const RankOnePOVM& scheme);

MeasurementResult measure_subsystem_a(const DensityMatrix& rho,
                                      const ProjectiveMeasurement& scheme);
MeasurementResult measure_subsystem_a(const DensityMatrix& rho, const RankOnePOVM& scheme);

/// Unnormalized B-conditionals <k_i| rho |k_i>_A for each ket; their traces
/// are the outcome probabilities. Shared by the measure objectives.
std::vector<ComplexMatrix> conditional_blocks(const ComplexMatrix& rho, BipartiteDims dims,
                                              std::span<const ComplexVector> kets);

/// sum_alpha p_alpha S(rho^(alpha)_AB) for a projective measurement on A.
EntropyValue conditional_entropy_measured(const DensityMatrix& rho,
                                          const ProjectiveMeasurement& scheme,
                                          LogBase base = LogBase::Bits);

struct DecoheredState {
  DensityMatrix state;
  ProjectiveMeasurement basis_a;
  ProjectiveMeasurement basis_b;
  bool degenerate_marginal = false;  // an eigenvalue tie was broken by convention
};

/// sum_{a,b} <ab|rho|ab> |a><a| (x) |b><b| over the eigenbases of the
/// marginals, as returned by hermitian_eig.
DecoheredState decohered_state(const DensityMatrix& rho);

}  // namespace qcorr
