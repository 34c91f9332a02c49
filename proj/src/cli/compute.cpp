#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>

#include "qcorr/cli.hpp"
#include "qcorr/correlations.hpp"
#include "qcorr/entropy.hpp"
#include "qcorr/errors.hpp"

namespace qcorr::cli {

namespace {

const std::vector<std::pair<Measure, std::string>>& labels() {
  static const std::vector<std::pair<Measure, std::string>> table{
      {Measure::MutualInfo, "mutual_info"},
      {Measure::Discord, "discord"},
      {Measure::Deficit, "deficit"},
      {Measure::CcHv, "cc_hv"},
      {Measure::Quantumness, "quantumness"},
      {Measure::Ere, "ere"},
      {Measure::CcGeneralized, "cc_generalized"},
      {Measure::AdditivityGap, "additivity_gap"},
  };
  return table;
}

Json vectors_json(const std::vector<ComplexVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) {
    Json row = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      row.push_back({round12(v(i).real()), round12(v(i).imag())});
    }
    out.push_back(std::move(row));
  }
  return out;
}

Json certificate_json(const Certificate& cert) {
  Json out;
  if (const auto* pm = std::get_if<ProjectiveMeasurement>(&cert)) {
    out["kind"] = "projective";
    out["basis"] = vectors_json(pm->basis);
  } else if (const auto* povm = std::get_if<RankOnePOVM>(&cert)) {
    out["kind"] = "rank_one_povm";
    out["kraus_vectors"] = vectors_json(povm->kraus_vectors);
  } else if (const auto* ansatz = std::get_if<SeparableAnsatz>(&cert)) {
    out["kind"] = "separable_ansatz";
    Json w = Json::array();
    for (double x : ansatz->weights()) w.push_back(round12(x));
    out["weights"] = std::move(w);
    out["a_vectors"] = vectors_json(ansatz->a_vectors);
    out["b_vectors"] = vectors_json(ansatz->b_vectors);
  } else {
    out = nullptr;
  }
  return out;
}

class Session {
 public:
  Session(const DensityMatrix& rho, const ComputeOptions& options)
      : rho_(rho), options_(options), config_(options.seed) {
    if (options.restarts) config_.restarts = *options.restarts;
    if (options.k_terms) config_.ansatz_terms = *options.k_terms;
    if (options.max_iters) {
      config_.max_iters = *options.max_iters;
      config_.ansatz_max_iters = *options.max_iters;
    }
    config_.threads = options.threads;
    config_.validate();
  }

  const MeasureReport& get(Measure m) {
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    const auto start = std::chrono::steady_clock::now();
    MeasureReport report = compute(m);
    seconds_[m] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cache_.emplace(m, std::move(report)).first->second;
  }

  double seconds(Measure m) const { return seconds_.at(m); }
  std::size_t restarts() const { return config_.restarts; }

 private:
  MeasureReport compute(Measure m) {
    switch (m) {
      case Measure::MutualInfo: {
        MeasureReport r;
        r.measure_name = "mutual_info";
        r.value = mutual_information(rho_).value;
        r.diagnostics.converged = true;
        return r;
      }
      case Measure::Discord:
        return quantum_discord(rho_, config_);
      case Measure::Deficit:
        return quantum_deficit(rho_);
      case Measure::CcHv:
        return classical_correlation_hv(rho_, options_.m_outcomes, config_);
      case Measure::Quantumness:
        return quantumness(rho_, config_);
      case Measure::Ere:
        return relative_entropy_of_entanglement(rho_, config_);
      case Measure::CcGeneralized:
        return generalized_classical_correlation(rho_, get(Measure::Quantumness));
      case Measure::AdditivityGap: {
        const MeasureReport& cc = get(Measure::CcHv);
        const MeasureReport& ere = get(Measure::Ere);
        MeasureReport r;
        r.measure_name = "additivity_gap";
        r.value = additivity_gap(rho_, cc, ere);
        r.diagnostics.converged = cc.diagnostics.converged && ere.diagnostics.converged;
        r.outcome_probabilities = cc.outcome_probabilities;
        return r;
      }
    }
    throw Error(ErrorKind::InternalInconsistency, "unhandled measure");
  }

  const DensityMatrix& rho_;
  const ComputeOptions& options_;
  OptimizerConfig config_;
  std::map<Measure, MeasureReport> cache_;
  std::map<Measure, double> seconds_;
};

bool optimizer_backed(Measure m) {
  return m != Measure::MutualInfo && m != Measure::Deficit;
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string measure_label(Measure m) {
  for (const auto& [key, label] : labels()) {
    if (key == m) return label;
  }
  throw Error(ErrorKind::InternalInconsistency, "unlabelled measure");
}

std::vector<Measure> parse_measures(const std::string& list) {
  std::vector<Measure> out;
  std::stringstream in(list);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto first = token.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    token = token.substr(first, token.find_last_not_of(" \t") - first + 1);
    bool found = false;
    for (const auto& [key, label] : labels()) {
      if (label != token) continue;
      found = true;
      if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
    }
    if (!found) throw Error(ErrorKind::ParseError, "unknown measure '" + token + "'");
  }
  if (out.empty()) throw Error(ErrorKind::ParseError, "no measures requested");
  return out;
}

ComputeOutcome run_compute(const StateSpec& spec, const std::vector<Measure>& measures,
                           const ComputeOptions& options) {
  const DensityMatrix rho = parse_state(spec);
  Session session(rho, options);
  const double scale = options.nats ? std::numbers::ln2 : 1.0;

  ComputeOutcome outcome;
  Json& report = outcome.report;
  report["tool"] = "qcorr";
  report["version"] = kToolVersion;
  report["seed"] = options.seed;
  report["unit"] = options.nats ? "nats" : "bits";
  report["state"] = describe_state(spec);
  Json entries = Json::object();
  for (Measure m : measures) {
    const MeasureReport& r = session.get(m);
    Json e;
    e["value"] = round12(r.value * scale);
    e["certificate"] = certificate_json(r.certificate);
    if (r.constraint_residual) {
      e["constraint_residual"] = round12(*r.constraint_residual);
    } else {
      e["constraint_residual"] = nullptr;
    }
    if (!r.outcome_probabilities.empty()) {
      Json q = Json::array();
      for (double x : r.outcome_probabilities) q.push_back(round12(x));
      e["outcome_probabilities"] = std::move(q);
    }
    e["degenerate_marginal"] = r.degeneracy_flag;
    Json diag;
    diag["restarts"] = optimizer_backed(m) ? session.restarts() : 0;
    diag["evaluations"] = r.diagnostics.evaluations;
    diag["iterations"] = r.diagnostics.iterations;
    diag["best_restart"] = r.diagnostics.restart_index;
    diag["converged"] = r.diagnostics.converged;
    if (options.timing) diag["wall_seconds"] = round12(session.seconds(m));
    e["diagnostics"] = std::move(diag);
    entries[measure_label(m)] = std::move(e);
    outcome.converged = outcome.converged && r.diagnostics.converged;
  }
  report["measures"] = std::move(entries);
  report["converged"] = outcome.converged;
  return outcome;
}

std::vector<double> p_grid(double start, double stop, std::size_t steps) {
  std::vector<double> out;
  if (steps == 0) return out;
  if (steps == 1) return {start};
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out.push_back(i + 1 == steps
                      ? stop
                      : start + (stop - start) * static_cast<double>(i) /
                                    static_cast<double>(steps - 1));
  }
  return out;
}

SweepOutcome run_sweep(const std::string& family, const std::vector<double>& grid,
                       const std::vector<Measure>& measures, const ComputeOptions& options) {
  if (family != "bell_mixture" && family != "nonorthogonal_sep" && family != "werner") {
    throw Error(ErrorKind::UnknownFamily, "family '" + family + "' has no single parameter");
  }
  SweepOutcome sweep;
  for (double p : grid) {
    StateSpec spec;
    spec.family = family;
    spec.p = p;
    sweep.points.push_back(run_compute(spec, measures, options));
    sweep.converged = sweep.converged && sweep.points.back().converged;
  }
  return sweep;
}

void write_sweep_csv(std::ostream& out, const std::vector<double>& grid,
                     const std::vector<Measure>& measures, const SweepOutcome& sweep) {
  out << "p";
  for (Measure m : measures) out << ',' << measure_label(m);
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", grid[i]);
    out << buf;
    const Json& entries = sweep.points[i].report.at("measures");
    for (Measure m : measures) {
      std::snprintf(buf, sizeof buf, "%.12g", entries.at(measure_label(m)).at("value").get<double>());
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace qcorr::cli
