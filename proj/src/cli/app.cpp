#include <fstream>

#include "CLI11.hpp"
#include "qcorr/cli.hpp"
#include "qcorr/errors.hpp"

namespace qcorr::cli {

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitInternal = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoConvergence:
      return kExitNoConvergence;
    case ErrorKind::InvalidConfig:
      return kExitUsage;
    case ErrorKind::InternalInconsistency:
      return kExitInternal;
    default:
      return kExitInvalid;
  }
}

void add_state_options(CLI::App* cmd, StateSpec& spec, std::string& file) {
  auto* f = cmd->add_option("--file", file, "JSON density matrix {dims, re, im}");
  auto* fam = cmd->add_option("--family", spec.family,
                              "bell_mixture | nonorthogonal_sep | werner | product | "
                              "random | pure_bell");
  f->excludes(fam);
  fam->excludes(f);
  cmd->add_option("--p", spec.p, "Family parameter in [0, 1]");
  cmd->add_option("--file-a", spec.file_a, "Subsystem A state for --family product");
  cmd->add_option("--file-b", spec.file_b, "Subsystem B state for --family product");
  cmd->add_option("--state-seed", spec.state_seed, "Seed for --family random");
  cmd->add_option("--rank", spec.rank, "Rank for --family random")->check(CLI::PositiveNumber);
}

void add_compute_options(CLI::App* cmd, ComputeOptions& options, std::string& measures,
                         std::optional<std::size_t>& restarts, std::optional<std::size_t>& k_terms,
                         std::optional<std::size_t>& max_iters) {
  cmd->add_option("--measures", measures,
                  "Comma list of mutual_info, discord, deficit, cc_hv, quantumness, ere, "
                  "cc_generalized, additivity_gap")
      ->required();
  cmd->add_option("--seed", options.seed, "Master seed for every optimizer")->required();
  cmd->add_option("--restarts", restarts, "Optimizer restarts (default 64)");
  cmd->add_flag("--nats", options.nats, "Report natural-log units");
  cmd->add_option("--k-terms", k_terms, "Separable ansatz terms (default (dA dB)^2)");
  cmd->add_option("--max-iters", max_iters, "Iteration cap per local search");
  cmd->add_option("--m-outcomes", options.m_outcomes, "POVM outcomes for cc_hv (default dA^2)");
  cmd->add_option("--threads", options.threads, "Worker threads for restarts")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", options.timing, "Include wall-clock seconds in diagnostics");
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum correlation measures for bipartite density matrices", "qcorr"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  StateSpec spec;
  std::string file;
  ComputeOptions options;
  std::string measures;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> k_terms;
  std::optional<std::size_t> max_iters;

  auto* compute = app.add_subcommand("compute", "Compute measures for one state");
  add_state_options(compute, spec, file);
  add_compute_options(compute, options, measures, restarts, k_terms, max_iters);

  std::string sweep_family;
  double p_start = 0.0;
  double p_stop = 1.0;
  std::size_t p_steps = 0;
  std::string csv_path;
  auto* sweep = app.add_subcommand("sweep", "Compute measures over a family parameter grid");
  sweep->add_option("--family", sweep_family, "bell_mixture | nonorthogonal_sep | werner")
      ->required();
  sweep->add_option("--p-start", p_start)->required();
  sweep->add_option("--p-stop", p_stop)->required();
  sweep->add_option("--p-steps", p_steps, "Number of grid points, endpoints included")
      ->required();
  sweep->add_option("--csv", csv_path, "Also write a CSV table here");
  add_compute_options(sweep, options, measures, restarts, k_terms, max_iters);

  auto* state = app.add_subcommand("state", "Print a state as density-matrix JSON");
  add_state_options(state, spec, file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }
  if (!file.empty()) spec.file = file;
  options.restarts = restarts;
  options.k_terms = k_terms;
  options.max_iters = max_iters;

  try {
    if (*state || *compute) {
      if (!spec.file && spec.family.empty()) {
        err << "one of --file or --family is required\n";
        return kExitUsage;
      }
    }
    if (*state) {
      out << density_to_json(parse_state(spec)).dump() << '\n';
      return 0;
    }
    const std::vector<Measure> requested = parse_measures(measures);
    if (*compute) {
      const ComputeOutcome outcome = run_compute(spec, requested, options);
      out << outcome.report.dump(2) << '\n';
      return outcome.converged ? 0 : kExitNoConvergence;
    }
    const std::vector<double> grid = p_grid(p_start, p_stop, p_steps);
    const SweepOutcome result = run_sweep(sweep_family, grid, requested, options);
    Json reports = Json::array();
    for (const auto& point : result.points) reports.push_back(point.report);
    out << reports.dump(2) << '\n';
    if (!csv_path.empty()) {
      std::ofstream csv(csv_path);
      if (!csv) {
        err << "cannot write " << csv_path << '\n';
        return kExitUsage;
      }
      write_sweep_csv(csv, grid, requested, result);
    }
    return result.converged ? 0 : kExitNoConvergence;
  } catch (const Error& e) {
    err << "qcorr: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "qcorr: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace qcorr::cli
