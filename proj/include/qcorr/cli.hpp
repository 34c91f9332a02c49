#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcorr/densop.hpp"

namespace qcorr::cli {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Where a state comes from: a JSON file, or a named family.
struct StateSpec {
  std::optional<std::string> file;
  std::string family;  // bell_mixture, nonorthogonal_sep, werner, product, random, pure_bell
  std::optional<double> p;
  std::string file_a;
  std::string file_b;
  std::uint64_t state_seed = 0;
  std::size_t rank = 4;
};

/// Throws ParseError, UnknownFamily, OutOfRange or a validation error.
DensityMatrix parse_state(const StateSpec& spec);

/// {"dims": [dA, dB], "re": [...], "im": [...]}, row-major. Doubles are
/// written at full precision so a parse of the output is bit-exact.
Json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& doc);
DensityMatrix read_density_file(const std::string& path);

Json describe_state(const StateSpec& spec);

enum class Measure {
  MutualInfo,
  Discord,
  Deficit,
  CcHv,
  Quantumness,
  Ere,
  CcGeneralized,
  AdditivityGap,
};

std::string measure_label(Measure m);

/// Comma-separated labels; throws ParseError on an unknown label. Order is
/// kept, duplicates dropped.
std::vector<Measure> parse_measures(const std::string& list);

struct ComputeOptions {
  std::uint64_t seed = 0;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> k_terms;
  /// Caps every local search, including each penalty stage.
  std::optional<std::size_t> max_iters;
  std::size_t m_outcomes = 0;
  std::size_t threads = 1;
  bool nats = false;
  bool timing = false;
};

struct ComputeOutcome {
  Json report;
  bool converged = true;
};

ComputeOutcome run_compute(const StateSpec& spec, const std::vector<Measure>& measures,
                           const ComputeOptions& options);

/// p_start, ..., p_stop in `steps` evenly spaced points (empty for 0).
std::vector<double> p_grid(double start, double stop, std::size_t steps);

struct SweepOutcome {
  std::vector<ComputeOutcome> points;
  bool converged = true;
};

SweepOutcome run_sweep(const std::string& family, const std::vector<double>& grid,
                       const std::vector<Measure>& measures, const ComputeOptions& options);

/// Header "p,<measure>,...", one row per grid point.
void write_sweep_csv(std::ostream& out, const std::vector<double>& grid,
                     const std::vector<Measure>& measures, const SweepOutcome& sweep);

/// Rounds to 12 significant digits.
double round12(double x);

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 usage error, 2 parse or validation failure, 3 optimizer
/// non-convergence, 4 internal error.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qcorr::cli
