#include "qcorr/correlations.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qcorr/entropy.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/tolerances.hpp"

namespace qcorr {

namespace {

std::vector<double> random_angles(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; i += 2) {
    x[i] = rng.uniform(0.0, std::numbers::pi);
    if (i + 1 < count) x[i + 1] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return x;
}

// S(rho_B) - sum_i q_i S(rho_B^i) in nats, and the q_i.
double hv_information_nats(const DensityMatrix& rho, std::span<const ComplexVector> kets,
                           std::vector<double>* probabilities) {
  const BipartiteDims dims = rho.bipartite();
  const double s_b =
      spectrum_entropy(hermitian_eigenvalues(partial_trace(rho.matrix(), dims, Subsystem::B)),
                       LogBase::Nats);
  double residual = 0.0;
  for (const auto& block : conditional_blocks(rho.matrix(), dims, kets)) {
    const double q = std::max(block.trace().real(), 0.0);
    if (probabilities) probabilities->push_back(q < tol::zero_probability ? 0.0 : q);
    if (q < tol::zero_probability) continue;
    residual += q * spectrum_entropy(hermitian_eigenvalues(block / q), LogBase::Nats);
  }
  return s_b - residual;
}

std::size_t resolve_terms(const OptimizerConfig& config, BipartiteDims dims) {
  return config.ansatz_terms == 0 ? default_ansatz_terms(dims) : config.ansatz_terms;
}

}  // namespace

double clamp_measure(double value, const std::string& name) {
  if (value >= 0.0 || std::isnan(value)) return value;
  if (value >= -tol::clamp) return 0.0;
  throw Error(ErrorKind::InternalInconsistency,
              name + " came out negative: " + std::to_string(value), value);
}

double discord_at(const DensityMatrix& rho, const ProjectiveMeasurement& basis) {
  return conditional_entropy_measured(rho, basis).value - conditional_entropy_vn(rho).value;
}

double hv_correlation_at(const DensityMatrix& rho, const RankOnePOVM& povm) {
  return hv_information_nats(rho, povm.kraus_vectors, nullptr) / std::numbers::ln2;
}

MeasureReport quantum_discord(const DensityMatrix& rho, const OptimizerConfig& config) {
  const std::size_t da = rho.bipartite().dim_a;
  const std::size_t n_params = projective_param_count(da);
  const Objective objective = [&rho, da](std::span<const double> x) {
    return conditional_entropy_measured(rho, projectors_from_params(da, x)).value;
  };
  OptResult opt = multi_restart(
      objective,
      [n_params](std::uint64_t seed, std::size_t) { return random_angles(seed, n_params); },
      config);

  ProjectiveMeasurement basis = projectors_from_params(da, opt.best_params);
  MeasureReport report;
  report.measure_name = "discord";
  report.value = clamp_measure(discord_at(rho, basis), "discord");
  for (const auto& outcome : measure_subsystem_a(rho, basis).outcomes) {
    report.outcome_probabilities.push_back(outcome.probability);
  }
  report.certificate = std::move(basis);
  report.diagnostics = std::move(opt);
  return report;
}

MeasureReport quantum_deficit(const DensityMatrix& rho) {
  DecoheredState decohered = decohered_state(rho);
  const EntropyValue d = relative_entropy(rho, decohered.state);
  if (!d.finite) {
    throw Error(ErrorKind::InternalInconsistency, "decohered state misses the support of rho");
  }
  MeasureReport report;
  report.measure_name = "deficit";
  report.value = clamp_measure(d.value, "deficit");
  report.degeneracy_flag = decohered.degenerate_marginal;
  for (const auto& outcome : measure_subsystem_a(rho, decohered.basis_a).outcomes) {
    report.outcome_probabilities.push_back(outcome.probability);
  }
  report.certificate = std::move(decohered.basis_a);
  report.diagnostics.best_value = d.value;
  report.diagnostics.converged = true;
  return report;
}

MeasureReport classical_correlation_hv(const DensityMatrix& rho, std::size_t m_outcomes,
                                       const OptimizerConfig& config) {
  const std::size_t da = rho.bipartite().dim_a;
  const std::size_t m = m_outcomes == 0 ? da * da : m_outcomes;
  if (m < da) {
    throw Error(ErrorKind::OutOfRange, "POVM needs at least dim_a outcomes");
  }
  const Objective objective = [&rho, da, m](std::span<const double> x) {
    try {
      const RankOnePOVM povm = povm_from_params(da, m, x);
      return -hv_information_nats(rho, povm.kraus_vectors, nullptr) / std::numbers::ln2;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::RankDeficient) return std::numeric_limits<double>::infinity();
      throw;
    }
  };
  const std::size_t n_params = 2 * m * da;
  OptResult opt = multi_restart(
      objective,
      [n_params](std::uint64_t seed, std::size_t) {
        Rng rng(seed);
        std::vector<double> x(n_params);
        for (double& v : x) v = rng.normal();
        return x;
      },
      config);

  RankOnePOVM povm = povm_from_params(da, m, opt.best_params);
  MeasureReport report;
  report.measure_name = "cc_hv";
  report.value = clamp_measure(
      hv_information_nats(rho, povm.kraus_vectors, &report.outcome_probabilities) /
          std::numbers::ln2,
      "cc_hv");
  report.certificate = std::move(povm);
  report.diagnostics = std::move(opt);
  return report;
}

namespace {

// Shared by quantumness (penalized continuation) and E_RE (lambda = 0).
MeasureReport separable_search(const DensityMatrix& rho, const OptimizerConfig& config,
                               bool constrained) {
  const BipartiteDims dims = rho.bipartite();
  const AnsatzLayout layout(dims, resolve_terms(config, dims));
  const DensityMatrix target_b = partial_trace(rho, Subsystem::B);

  OptimizerConfig local = config;
  local.max_iters = config.ansatz_max_iters;
  // E_RE gets the same number of warm-started passes as the penalty
  // schedule has stages, with lambda pinned at zero.
  const RestartRunner runner = [&](std::uint64_t seed, std::size_t) {
    Rng rng(seed);
    const std::vector<double> x0 = layout.random_params(rng);
    return penalty_continuation(
        [&](double lambda) {
          return penalized_q_objective(rho, target_b, constrained ? lambda : 0.0, layout);
        },
        x0, local);
  };
  OptResult opt = multi_restart(runner, config);

  SeparableAnsatz ansatz = layout.decode(opt.best_params);
  const DensityMatrix sigma = ansatz_to_state(ansatz);
  const EntropyValue exact = relative_entropy(rho, sigma);

  MeasureReport report;
  report.measure_name = constrained ? "quantumness" : "ere";
  report.value = clamp_measure(exact.value, report.measure_name);
  if (constrained) {
    report.constraint_residual = marginal_residual(ansatz, target_b);
    opt.constraint_residual = report.constraint_residual;
  }
  report.certificate = std::move(ansatz);
  report.diagnostics = std::move(opt);
  return report;
}

}  // namespace

MeasureReport quantumness(const DensityMatrix& rho, const OptimizerConfig& config) {
  return separable_search(rho, config, true);
}

MeasureReport relative_entropy_of_entanglement(const DensityMatrix& rho,
                                               const OptimizerConfig& config) {
  return separable_search(rho, config, false);
}

MeasureReport generalized_classical_correlation(const DensityMatrix& rho,
                                                const MeasureReport& quantumness_report) {
  MeasureReport report = quantumness_report;
  report.measure_name = "cc_generalized";
  report.value =
      clamp_measure(mutual_information(rho).value - quantumness_report.value, "cc_generalized");
  return report;
}

MeasureReport generalized_classical_correlation(const DensityMatrix& rho,
                                                const OptimizerConfig& config) {
  return generalized_classical_correlation(rho, quantumness(rho, config));
}

double additivity_gap(const DensityMatrix& rho, const MeasureReport& cc_hv,
                      const MeasureReport& ere) {
  double q_log_q = 0.0;
  for (double q : cc_hv.outcome_probabilities) {
    if (q > 0.0) q_log_q += q * std::log2(q);
  }
  return mutual_information(rho).value - cc_hv.value - ere.value - q_log_q;
}

double additivity_gap(const DensityMatrix& rho, std::size_t m_outcomes,
                      const OptimizerConfig& config) {
  return additivity_gap(rho, classical_correlation_hv(rho, m_outcomes, config),
                        relative_entropy_of_entanglement(rho, config));
}

}  // namespace qcorr
