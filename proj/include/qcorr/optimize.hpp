#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qcorr/densop.hpp"
#include "qcorr/entropy.hpp"

namespace qcorr {

using Objective = std::function<double(std::span<const double>)>;

/// Deterministic 64-bit generator with platform-independent uniform and
/// normal variates (the standard distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  double uniform() noexcept;  // [0, 1)
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept;

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for restart `index`: mix64(master + (index + 1) * 0x9E3779B97F4A7C15).
/// Depends only on (master, index), so restarts can run in any order.
std::uint64_t restart_seed(std::uint64_t master, std::size_t index) noexcept;

struct OptimizerConfig {
  explicit OptimizerConfig(std::uint64_t seed_) : seed(seed_) {}

  std::size_t restarts = 64;
  std::size_t max_iters = 2000;
  /// Per-stage iteration cap for the separable-ansatz searches, whose
  /// simplex has K (1 + 2(d_A - 1) + 2(d_B - 1)) vertices minus one.
  std::size_t ansatz_max_iters = 20000;
  double xtol = 1e-8;
  double ftol = 1e-10;
  std::uint64_t seed;
  std::vector<double> penalty_schedule{1e1, 1e2, 1e3, 1e4};
  /// Separable-ansatz terms K; 0 selects dim_a^2 * dim_b^2.
  std::size_t ansatz_terms = 0;
  /// Worker threads for independent restarts. Results do not depend on it.
  std::size_t threads = 1;

  /// Throws InvalidConfig on restarts == 0, a non-increasing schedule, ...
  void validate() const;
};

struct OptResult {
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  std::size_t restart_index = 0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<double> constraint_residual;
  /// Final value of every restart, in restart order (multi_restart only).
  std::vector<double> restart_values;
  /// Objective value at the end of each continuation stage, when staged.
  std::vector<double> stage_values;
};

/// Downhill simplex with reflection/expansion/contraction/shrink
/// coefficients (1, 2, 0.5, 0.5). The initial simplex offsets coordinate i
/// by max(0.05, 0.05 |x0_i|). Stops when the simplex diameter (max-norm
/// distance to the best vertex) drops below xtol, when the value spread
/// drops below ftol, or after max_iters iterations. NaN counts as +inf.
OptResult nelder_mead_minimize(const Objective& objective, std::span<const double> x0,
                               const OptimizerConfig& config);

/// Start-point generator: (per-restart seed, restart index) -> x0.
using StartSampler = std::function<std::vector<double>(std::uint64_t, std::size_t)>;

/// One complete local search for a restart, e.g. a penalty continuation.
using RestartRunner = std::function<OptResult(std::uint64_t, std::size_t)>;

/// Runs config.restarts independent searches and keeps the lowest value,
/// ties going to the lowest restart index. `evaluations` is summed over all
/// restarts.
OptResult multi_restart(const RestartRunner& run, const OptimizerConfig& config);
OptResult multi_restart(const Objective& objective, const StartSampler& sampler,
                        const OptimizerConfig& config);

/// Convex mixture of K pure product states. Weights are the softmax of
/// weights_raw.
struct SeparableAnsatz {
  std::vector<double> weights_raw;
  std::vector<ComplexVector> a_vectors;
  std::vector<ComplexVector> b_vectors;

  std::size_t terms() const noexcept { return weights_raw.size(); }
  std::vector<double> weights() const;
};

/// sum_i p_i |a_i><a_i| (x) |b_i><b_i| with every vector normalized.
DensityMatrix ansatz_to_state(const SeparableAnsatz& ansatz);

/// sum_i p_i |b_i><b_i|.
ComplexMatrix ansatz_marginal_b(const SeparableAnsatz& ansatz);

/// Frobenius distance between the ansatz B-mixture and target_b.
double marginal_residual(const SeparableAnsatz& ansatz, const DensityMatrix& target_b);

/// Maps between SeparableAnsatz and the flat real vector the optimizer
/// moves. Per term: one raw weight, then 2(d-1) hyperspherical angles for
/// each of the A and B kets (d-1 amplitude angles, then d-1 relative phases).
class AnsatzLayout {
 public:
  AnsatzLayout(BipartiteDims dims, std::size_t terms);

  std::size_t terms() const noexcept { return terms_; }
  BipartiteDims dims() const noexcept { return dims_; }
  std::size_t param_count() const noexcept;

  SeparableAnsatz decode(std::span<const double> params) const;
  std::vector<double> encode(const SeparableAnsatz& ansatz) const;
  std::vector<double> random_params(Rng& rng) const;

  /// Builds sum_i p_i |a_i b_i><a_i b_i| straight from parameters.
  ComplexMatrix state_matrix(std::span<const double> params) const;

 private:
  BipartiteDims dims_;
  std::size_t terms_;
};

/// Default K for the given dimensions: (dim_a dim_b)^2.
std::size_t default_ansatz_terms(BipartiteDims dims) noexcept;

/// params -> S_eps(rho || sigma(params)) + lambda * |sigma_B(params) - target_b|_F^2,
/// in bits, with eps = 1e-12. lambda = 0 gives the unconstrained separable
/// objective.
Objective penalized_q_objective(const DensityMatrix& rho, const DensityMatrix& target_b,
                                double lambda, const AnsatzLayout& layout);

/// Runs one local search per lambda in the schedule, each warm-started from
/// the previous stage's optimum. Stages use config.max_iters.
OptResult penalty_continuation(const std::function<Objective(double)>& stage_objective,
                               std::span<const double> x0, const OptimizerConfig& config);

}  // namespace qcorr
