#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcorr/densop.hpp"
#include "qcorr/measurement.hpp"
#include "qcorr/optimize.hpp"

namespace qcorr {

/// The witness behind a reported value.
using Certificate =
    std::variant<std::monostate, ProjectiveMeasurement, RankOnePOVM, SeparableAnsatz>;

/// All values are in bits.
struct MeasureReport {
  std::string measure_name;
  double value = 0.0;
  Certificate certificate;
  std::optional<double> constraint_residual;
  OptResult diagnostics;
  bool degeneracy_flag = false;
  /// Outcome probabilities of the certificate measurement, when it is one.
  std::vector<double> outcome_probabilities;
};

/// min over projective bases on A of S(B|A_Pi), minus S(AB) - S(A).
MeasureReport quantum_discord(const DensityMatrix& rho, const OptimizerConfig& config);

/// S(rho || rho_d) with rho_d the decohered state in the marginal eigenbases.
MeasureReport quantum_deficit(const DensityMatrix& rho);

/// max over rank-1 POVMs on A of S(rho_B) - sum_i q_i S(rho_B^i).
/// m_outcomes = 0 selects dim_a^2.
MeasureReport classical_correlation_hv(const DensityMatrix& rho, std::size_t m_outcomes,
                                       const OptimizerConfig& config);

/// min S(rho || sigma) over separable sigma whose B-marginal equals rho_B,
/// by penalty continuation on the separable ansatz. The value is the exact
/// relative entropy at the certificate.
MeasureReport quantumness(const DensityMatrix& rho, const OptimizerConfig& config);

/// Same minimization without the marginal constraint.
MeasureReport relative_entropy_of_entanglement(const DensityMatrix& rho,
                                               const OptimizerConfig& config);

/// Mutual information minus quantumness. Pass a precomputed quantumness
/// report to avoid repeating the optimization.
MeasureReport generalized_classical_correlation(const DensityMatrix& rho,
                                                const OptimizerConfig& config);
MeasureReport generalized_classical_correlation(const DensityMatrix& rho,
                                                const MeasureReport& quantumness_report);

/// S(A:B) - C_A - E_RE - sum_i q_i log2 q_i with q from the C_A-optimal POVM.
double additivity_gap(const DensityMatrix& rho, std::size_t m_outcomes,
                      const OptimizerConfig& config);
double additivity_gap(const DensityMatrix& rho, const MeasureReport& cc_hv,
                      const MeasureReport& ere);

/// Values in [-1e-9, 0) become 0; anything lower throws InternalInconsistency.
double clamp_measure(double value, const std::string& name);

/// Objective value at a certificate, for re-evaluation checks.
double discord_at(const DensityMatrix& rho, const ProjectiveMeasurement& basis);
double hv_correlation_at(const DensityMatrix& rho, const RankOnePOVM& povm);

}  // namespace qcorr
