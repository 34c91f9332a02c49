#include "qcorr/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>

#include "qcorr/errors.hpp"
#include "qcorr/tolerances.hpp"

namespace qcorr {

// ---------------------------------------------------------------------------
// random numbers

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t restart_seed(std::uint64_t master, std::size_t index) noexcept {
  return mix64(master + (static_cast<std::uint64_t>(index) + 1) * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t Rng::next() noexcept {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() noexcept {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  return r * std::cos(angle);
}

// ---------------------------------------------------------------------------
// configuration

void OptimizerConfig::validate() const {
  if (restarts < 1) throw Error(ErrorKind::InvalidConfig, "restarts must be >= 1");
  if (max_iters < 1 || ansatz_max_iters < 1) throw Error(ErrorKind::InvalidConfig, "max_iters must be >= 1");
  if (!(xtol >= 0.0) || !(ftol >= 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "tolerances must be nonnegative");
  }
  if (penalty_schedule.empty()) throw Error(ErrorKind::InvalidConfig, "empty penalty schedule");
  for (std::size_t i = 0; i < penalty_schedule.size(); ++i) {
    if (!(penalty_schedule[i] > 0.0)) {
      throw Error(ErrorKind::InvalidConfig, "penalty weights must be positive");
    }
    if (i > 0 && !(penalty_schedule[i] > penalty_schedule[i - 1])) {
      throw Error(ErrorKind::InvalidConfig, "penalty schedule must be strictly increasing");
    }
  }
  if (threads < 1) throw Error(ErrorKind::InvalidConfig, "threads must be >= 1");
}

// ---------------------------------------------------------------------------
// Nelder-Mead

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

using Point = std::vector<double>;

struct CountingObjective {
  const Objective& f;
  std::size_t calls = 0;

  double operator()(const Point& x) {
    ++calls;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }
};

// x = base + t * (dir - base)
Point along(const Point& base, const Point& dir, double t) {
  Point out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * (dir[i] - base[i]);
  return out;
}

}  // namespace

OptResult nelder_mead_minimize(const Objective& objective, std::span<const double> x0,
                               const OptimizerConfig& config) {
  const std::size_t n = x0.size();
  CountingObjective f{objective};
  OptResult result;

  // Vertices stay sorted by value (stable: earlier vertices win ties).
  std::vector<Point> simplex(n + 1, Point(x0.begin(), x0.end()));
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] += std::max(0.05, 0.05 * std::abs(x0[i]));
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);
  {
    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Point> sorted_points;
    std::vector<double> sorted_values;
    for (std::size_t i : order) {
      sorted_points.push_back(simplex[i]);
      sorted_values.push_back(values[i]);
    }
    simplex = std::move(sorted_points);
    values = std::move(sorted_values);
  }

  // Sum of all vertices, so the centroid of the best n is (sum - worst) / n.
  Point sum(n, 0.0);
  auto recompute_sum = [&] {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (const auto& v : simplex) {
      for (std::size_t k = 0; k < n; ++k) sum[k] += v[k];
    }
  };
  recompute_sum();

  // Replace the worst vertex and slide it to its sorted position; a new
  // vertex goes after existing vertices of equal value.
  auto replace_worst = [&](Point x, double fx) {
    for (std::size_t k = 0; k < n; ++k) sum[k] += x[k] - simplex[n][k];
    std::size_t pos = n;
    while (pos > 0 && values[pos - 1] > fx) --pos;
    for (std::size_t i = n; i > pos; --i) {
      simplex[i] = std::move(simplex[i - 1]);
      values[i] = values[i - 1];
    }
    simplex[pos] = std::move(x);
    values[pos] = fx;
  };

  auto converged = [&] {
    if (n == 0) return true;
    if (values[n] - values[0] < config.ftol) return true;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!(std::abs(simplex[i][k] - simplex[0][k]) < config.xtol)) return false;
      }
    }
    return true;
  };

  std::size_t iter = 0;
  Point centroid(n);
  while (iter < config.max_iters && !converged()) {
    ++iter;
    // Periodic refresh keeps the running sum from drifting.
    if (iter % (n + 1) == 0) recompute_sum();
    for (std::size_t k = 0; k < n; ++k) {
      centroid[k] = (sum[k] - simplex[n][k]) / static_cast<double>(n);
    }

    const Point& worst = simplex[n];
    Point xr = along(centroid, worst, -kReflect);
    const double fr = f(xr);

    if (fr < values[0]) {
      Point xe = along(centroid, xr, kExpand);
      const double fe = f(xe);
      if (fe < fr) {
        replace_worst(std::move(xe), fe);
      } else {
        replace_worst(std::move(xr), fr);
      }
      continue;
    }
    if (fr < values[n - 1]) {
      replace_worst(std::move(xr), fr);
      continue;
    }
    if (fr < values[n]) {
      Point xc = along(centroid, xr, kContract);
      const double fc = f(xc);
      if (fc <= fr) {
        replace_worst(std::move(xc), fc);
        continue;
      }
    } else {
      Point xcc = along(centroid, worst, kContract);
      const double fcc = f(xcc);
      if (fcc < values[n]) {
        replace_worst(std::move(xcc), fcc);
        continue;
      }
    }
    // shrink toward the best vertex
    for (std::size_t i = 1; i <= n; ++i) {
      simplex[i] = along(simplex[0], simplex[i], kShrink);
      values[i] = f(simplex[i]);
    }
    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Point> sorted_points;
    std::vector<double> sorted_values;
    for (std::size_t i : order) {
      sorted_points.push_back(std::move(simplex[i]));
      sorted_values.push_back(values[i]);
    }
    simplex = std::move(sorted_points);
    values = std::move(sorted_values);
    recompute_sum();
  }

  result.best_value = values[0];
  result.best_params = simplex[0];
  result.evaluations = f.calls;
  result.iterations = iter;
  result.converged = converged();
  return result;
}

// ---------------------------------------------------------------------------
// restarts

OptResult multi_restart(const RestartRunner& run, const OptimizerConfig& config) {
  config.validate();
  const std::size_t count = config.restarts;
  std::vector<std::optional<OptResult>> slots(count);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r < count; r = next++) {
      try {
        slots[r] = run(restart_seed(config.seed, r), r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(config.threads, count);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Merge in index order: strict < keeps the lowest index on ties.
  OptResult best = *slots[0];
  best.restart_index = 0;
  std::size_t evaluations = 0;
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    evaluations += slots[r]->evaluations;
    values.push_back(slots[r]->best_value);
    if (slots[r]->best_value < best.best_value) {
      best = *slots[r];
      best.restart_index = r;
    }
  }
  best.evaluations = evaluations;
  best.restart_values = std::move(values);
  return best;
}

OptResult multi_restart(const Objective& objective, const StartSampler& sampler,
                        const OptimizerConfig& config) {
  return multi_restart(
      [&](std::uint64_t seed, std::size_t index) {
        const auto x0 = sampler(seed, index);
        return nelder_mead_minimize(objective, x0, config);
      },
      config);
}

// ---------------------------------------------------------------------------
// separable ansatz

namespace {

std::vector<double> softmax(std::span<const double> raw) {
  std::vector<double> out(raw.size());
  if (raw.empty()) return out;
  const double top = *std::max_element(raw.begin(), raw.end());
  double total = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = std::exp(raw[i] - top);
    total += out[i];
  }
  for (double& w : out) w /= total;
  return out;
}

std::size_t ket_params(std::size_t dim) { return 2 * (dim - 1); }

// Hyperspherical amplitudes with relative phases; first component real >= 0.
void decode_ket_into(std::size_t dim, const double* p, Complex* out) {
  double tail = 1.0;
  for (std::size_t k = 0; k + 1 < dim; ++k) {
    const double amp = tail * std::cos(p[k]);
    tail *= std::sin(p[k]);
    out[k] = k == 0 ? Complex(amp) : std::polar(1.0, p[dim - 1 + k - 1]) * amp;
  }
  out[dim - 1] = std::polar(1.0, p[2 * dim - 3]) * tail;
}

ComplexVector decode_ket(std::size_t dim, const double* p) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  decode_ket_into(dim, p, v.data());
  return v;
}

void encode_ket(const ComplexVector& ket, double* p) {
  const auto dim = static_cast<std::size_t>(ket.size());
  ComplexVector v = ket.normalized();
  if (std::abs(v(0)) > 0.0) v *= std::conj(v(0)) / std::abs(v(0));
  std::vector<double> tail_norm(dim + 1, 0.0);
  for (std::size_t k = dim; k-- > 0;) {
    tail_norm[k] = std::hypot(tail_norm[k + 1], std::abs(v(static_cast<Eigen::Index>(k))));
  }
  for (std::size_t k = 0; k + 1 < dim; ++k) {
    p[k] = std::atan2(tail_norm[k + 1], std::abs(v(static_cast<Eigen::Index>(k))));
  }
  for (std::size_t k = 1; k < dim; ++k) {
    p[dim - 1 + k - 1] = std::arg(v(static_cast<Eigen::Index>(k)));
  }
}

}  // namespace

std::vector<double> SeparableAnsatz::weights() const { return softmax(weights_raw); }

ComplexMatrix ansatz_marginal_b(const SeparableAnsatz& ansatz) {
  if (ansatz.terms() == 0) throw Error(ErrorKind::InvalidConfig, "empty ansatz");
  const auto w = ansatz.weights();
  const auto db = ansatz.b_vectors.front().size();
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (std::size_t i = 0; i < w.size(); ++i) {
    out += w[i] * projector(ansatz.b_vectors[i].normalized());
  }
  return out;
}

DensityMatrix ansatz_to_state(const SeparableAnsatz& ansatz) {
  if (ansatz.terms() == 0 || ansatz.a_vectors.size() != ansatz.terms() ||
      ansatz.b_vectors.size() != ansatz.terms()) {
    throw Error(ErrorKind::DimensionMismatch, "ansatz term lists differ in length");
  }
  const auto w = ansatz.weights();
  const auto da = static_cast<std::size_t>(ansatz.a_vectors.front().size());
  const auto db = static_cast<std::size_t>(ansatz.b_vectors.front().size());
  const auto n = static_cast<Eigen::Index>(da * db);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const ComplexVector ket =
        kron(ansatz.a_vectors[i].normalized(), ansatz.b_vectors[i].normalized());
    out += w[i] * projector(ket);
  }
  return trusted_density(std::move(out), BipartiteDims{da, db});
}

double marginal_residual(const SeparableAnsatz& ansatz, const DensityMatrix& target_b) {
  const ComplexMatrix mb = ansatz_marginal_b(ansatz);
  if (mb.rows() != static_cast<Eigen::Index>(target_b.dim())) {
    throw Error(ErrorKind::DimensionMismatch, "ansatz B dimension differs from target");
  }
  return (mb - target_b.matrix()).norm();
}

std::size_t default_ansatz_terms(BipartiteDims dims) noexcept {
  return dims.total() * dims.total();
}

AnsatzLayout::AnsatzLayout(BipartiteDims dims, std::size_t terms) : dims_(dims), terms_(terms) {
  if (terms_ < 1) throw Error(ErrorKind::InvalidConfig, "ansatz needs at least one term");
}

std::size_t AnsatzLayout::param_count() const noexcept {
  return terms_ * (1 + ket_params(dims_.dim_a) + ket_params(dims_.dim_b));
}

SeparableAnsatz AnsatzLayout::decode(std::span<const double> params) const {
  if (params.size() != param_count()) {
    throw Error(ErrorKind::BadParamLength, "ansatz expects " + std::to_string(param_count()) +
                                               " parameters, got " +
                                               std::to_string(params.size()));
  }
  const std::size_t stride = param_count() / terms_;
  SeparableAnsatz out;
  for (std::size_t i = 0; i < terms_; ++i) {
    const double* p = params.data() + i * stride;
    out.weights_raw.push_back(p[0]);
    out.a_vectors.push_back(decode_ket(dims_.dim_a, p + 1));
    out.b_vectors.push_back(decode_ket(dims_.dim_b, p + 1 + ket_params(dims_.dim_a)));
  }
  return out;
}

std::vector<double> AnsatzLayout::encode(const SeparableAnsatz& ansatz) const {
  if (ansatz.terms() != terms_) {
    throw Error(ErrorKind::BadParamLength, "ansatz has " + std::to_string(ansatz.terms()) +
                                               " terms, layout expects " +
                                               std::to_string(terms_));
  }
  const std::size_t stride = param_count() / terms_;
  std::vector<double> out(param_count());
  for (std::size_t i = 0; i < terms_; ++i) {
    double* p = out.data() + i * stride;
    p[0] = ansatz.weights_raw[i];
    encode_ket(ansatz.a_vectors[i], p + 1);
    encode_ket(ansatz.b_vectors[i], p + 1 + ket_params(dims_.dim_a));
  }
  return out;
}

std::vector<double> AnsatzLayout::random_params(Rng& rng) const {
  // Haar-random kets and a Gaussian raw weight per term.
  SeparableAnsatz ansatz;
  auto random_ket = [&](std::size_t dim) {
    ComplexVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = Complex(rng.normal(), rng.normal());
    return ComplexVector(v.normalized());
  };
  for (std::size_t i = 0; i < terms_; ++i) {
    ansatz.weights_raw.push_back(rng.normal());
    ansatz.a_vectors.push_back(random_ket(dims_.dim_a));
    ansatz.b_vectors.push_back(random_ket(dims_.dim_b));
  }
  return encode(ansatz);
}

ComplexMatrix AnsatzLayout::state_matrix(std::span<const double> params) const {
  if (params.size() != param_count()) {
    throw Error(ErrorKind::BadParamLength, "ansatz expects " + std::to_string(param_count()) +
                                               " parameters");
  }
  const std::size_t da = dims_.dim_a;
  const std::size_t db = dims_.dim_b;
  const std::size_t n = da * db;
  const std::size_t stride = param_count() / terms_;

  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < terms_; ++i) top = std::max(top, params[i * stride]);
  double total = 0.0;
  for (std::size_t i = 0; i < terms_; ++i) total += std::exp(params[i * stride] - top);

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(n),
                                          static_cast<Eigen::Index>(n));
  std::vector<Complex> a(da), b(db), ket(n);
  for (std::size_t i = 0; i < terms_; ++i) {
    const double* p = params.data() + i * stride;
    const double w = std::exp(p[0] - top) / total;
    decode_ket_into(da, p + 1, a.data());
    decode_ket_into(db, p + 1 + ket_params(da), b.data());
    for (std::size_t x = 0; x < da; ++x) {
      for (std::size_t y = 0; y < db; ++y) ket[x * db + y] = a[x] * b[y];
    }
    for (std::size_t c = 0; c < n; ++c) {
      const Complex wc = w * std::conj(ket[c]);
      for (std::size_t r = 0; r <= c; ++r) {
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += ket[r] * wc;
      }
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = c + 1; r < n; ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          std::conj(out(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)));
    }
  }
  return out;
}

Objective penalized_q_objective(const DensityMatrix& rho, const DensityMatrix& target_b,
                                double lambda, const AnsatzLayout& layout) {
  const BipartiteDims dims = rho.bipartite();
  if (layout.dims() != dims || target_b.dim() != dims.dim_b) {
    throw Error(ErrorKind::DimensionMismatch, "objective dimensions disagree");
  }
  if (!(lambda >= 0.0)) throw Error(ErrorKind::OutOfRange, "lambda must be >= 0", lambda);
  auto divergence = std::make_shared<const RelativeEntropyFrom>(rho);
  ComplexMatrix target = target_b.matrix();
  return [divergence, target = std::move(target), lambda, layout,
          dims](std::span<const double> params) {
    const ComplexMatrix sigma = layout.state_matrix(params);
    double value = divergence->floored_nats(sigma, tol::floor_eps) / std::numbers::ln2;
    if (lambda > 0.0) {
      const double residual = (partial_trace(sigma, dims, Subsystem::B) - target).norm();
      value += lambda * residual * residual;
    }
    return value;
  };
}

OptResult penalty_continuation(const std::function<Objective(double)>& stage_objective,
                               std::span<const double> x0, const OptimizerConfig& config) {
  config.validate();
  std::vector<double> x(x0.begin(), x0.end());
  OptResult out;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  for (double lambda : config.penalty_schedule) {
    OptResult stage = nelder_mead_minimize(stage_objective(lambda), x, config);
    evaluations += stage.evaluations;
    iterations += stage.iterations;
    x = stage.best_params;
    out.stage_values.push_back(stage.best_value);
    out.best_value = stage.best_value;
    out.converged = stage.converged;
  }
  out.best_params = std::move(x);
  out.evaluations = evaluations;
  out.iterations = iterations;
  return out;
}

}  // namespace qcorr
