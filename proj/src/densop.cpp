#include "qcorr/densop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qcorr/errors.hpp"
#include "qcorr/tolerances.hpp"

namespace qcorr {

namespace {

constexpr int kMaxSweeps = 64;

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": expected a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Dense row-major Hermitian working copy for the Jacobi sweeps.
struct JacobiWork {
  std::size_t n;
  std::vector<Complex> a;
  std::vector<Complex> v;  // empty when eigenvectors are not requested

  Complex& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  Complex& vec(std::size_t i, std::size_t j) { return v[i * n + j]; }
};

double off_diagonal_norm2(JacobiWork& w) {
  double off = 0.0;
  for (std::size_t p = 0; p < w.n; ++p) {
    for (std::size_t q = p + 1; q < w.n; ++q) off += std::norm(w.at(p, q));
  }
  return off;
}

// Cyclic row-by-row sweeps of complex Givens rotations until the
// off-diagonal mass is below round-off relative to the full norm.
void jacobi_diagonalize(JacobiWork& w) {
  const std::size_t n = w.n;
  double total = 0.0;
  for (const auto& x : w.a) total += std::norm(x);
  if (total == 0.0) return;
  const double target = total * 1e-32;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm2(w) <= target) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = w.at(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double alpha = w.at(p, p).real();
        const double beta = w.at(q, q).real();
        // Skip rotations that can no longer change the diagonal.
        if (sweep > 3 && std::abs(alpha) + 100.0 * g == std::abs(alpha) &&
            std::abs(beta) + 100.0 * g == std::abs(beta)) {
          w.at(p, q) = 0.0;
          w.at(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / g;
        const double theta = (beta - alpha) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex s_fwd = s * phase;             // U(p,q)
        const Complex s_back = -s * std::conj(phase);  // U(q,p)

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = w.at(k, p);
          const Complex akq = w.at(k, q);
          const Complex new_kp = c * akp + s_back * akq;
          const Complex new_kq = s_fwd * akp + c * akq;
          w.at(k, p) = new_kp;
          w.at(p, k) = std::conj(new_kp);
          w.at(k, q) = new_kq;
          w.at(q, k) = std::conj(new_kq);
        }
        w.at(p, p) = alpha - t * g;
        w.at(q, q) = beta + t * g;
        w.at(p, q) = 0.0;
        w.at(q, p) = 0.0;

        if (!w.v.empty()) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = w.vec(k, p);
            const Complex vkq = w.vec(k, q);
            w.vec(k, p) = c * vkp + s_back * vkq;
            w.vec(k, q) = s_fwd * vkp + c * vkq;
          }
        }
      }
    }
  }
  if (off_diagonal_norm2(w) > target) {
    throw Error(ErrorKind::NoConvergence,
                "Jacobi sweeps exhausted (" + std::to_string(kMaxSweeps) + ")",
                std::sqrt(off_diagonal_norm2(w)));
  }
}

JacobiWork load(const ComplexMatrix& h, bool vectors) {
  require_square(h, "hermitian_eig");
  const double defect = hermiticity_defect(h);
  if (defect > tol::validation) {
    throw Error(ErrorKind::NotHermitian, "max |H - H^dagger| = " + std::to_string(defect),
                defect);
  }
  JacobiWork w{static_cast<std::size_t>(h.rows()), {}, {}};
  const std::size_t n = w.n;
  w.a.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      w.at(i, j) = 0.5 * (h(ii, jj) + std::conj(h(jj, ii)));
    }
  }
  if (vectors) {
    w.v.assign(n * n, Complex(0.0));
    for (std::size_t i = 0; i < n; ++i) w.vec(i, i) = 1.0;
  }
  return w;
}

std::vector<std::size_t> descending_order(JacobiWork& w) {
  std::vector<std::size_t> order(w.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return w.at(x, x).real() > w.at(y, y).real();
  });
  return order;
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

EigenDecomposition hermitian_eig(const ComplexMatrix& h) {
  JacobiWork w = load(h, true);
  jacobi_diagonalize(w);
  const std::size_t n = w.n;
  const auto order = descending_order(w);

  EigenDecomposition out;
  out.eigenvalues.reserve(n);
  out.eigenvectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues.push_back(w.at(src, src).real());
    double norm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) norm2 += std::norm(w.vec(k, src));
    Complex scale = 1.0 / std::sqrt(norm2);
    std::size_t pivot = n;
    for (std::size_t k = 0; k < n; ++k) {
      const double mod = std::abs(w.vec(k, src)) * scale.real();
      if (mod > tol::phase) {
        scale *= std::conj(w.vec(k, src)) / std::abs(w.vec(k, src));
        pivot = k;
        break;
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      Complex v = w.vec(k, src) * scale;
      if (k == pivot) v = Complex(std::abs(v), 0.0);
      out.eigenvectors(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(col)) = v;
    }
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  JacobiWork w = load(h, false);
  jacobi_diagonalize(w);
  std::vector<double> values(w.n);
  for (std::size_t i = 0; i < w.n; ++i) values[i] = w.at(i, i).real();
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

const BipartiteDims& DensityMatrix::bipartite() const {
  if (!dims_) throw Error(ErrorKind::MissingDims, "state has no bipartite dimensions");
  return *dims_;
}

DensityMatrix validate_density(const ComplexMatrix& mat, std::optional<BipartiteDims> dims) {
  require_square(mat, "validate_density");
  const auto n = static_cast<std::size_t>(mat.rows());
  if (dims) {
    if (dims->dim_a < 2 || dims->dim_b < 2 || dims->total() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "dims " + std::to_string(dims->dim_a) + "x" + std::to_string(dims->dim_b) +
                      " do not split a " + std::to_string(n) + "-dimensional operator");
    }
  }
  const double defect = hermiticity_defect(mat);
  if (!(defect <= tol::validation)) {
    throw Error(ErrorKind::NotHermitian, "max |rho - rho^dagger| = " + std::to_string(defect),
                defect);
  }
  const Complex trace = mat.trace();
  const double trace_err = std::abs(trace - 1.0);
  if (!(trace_err <= tol::validation)) {
    throw Error(ErrorKind::NotUnitTrace, "trace = " + std::to_string(trace.real()), trace_err);
  }

  ComplexMatrix h = hermitian_part(mat);
  const EigenDecomposition eig = hermitian_eig(h);
  const double min_eig = eig.eigenvalues.back();
  if (min_eig < -tol::validation) {
    throw Error(ErrorKind::NotPositive, "min eigenvalue = " + std::to_string(min_eig),
                -min_eig);
  }
  if (min_eig < -tol::roundoff) {
    Eigen::VectorXd clamped(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      clamped(static_cast<Eigen::Index>(i)) = std::max(eig.eigenvalues[i], 0.0);
    }
    const ComplexMatrix& v = eig.eigenvectors;
    h = hermitian_part(v * clamped.cast<Complex>().asDiagonal() * v.adjoint());
  }
  // Already-normalized input passes through untouched, so validation is idempotent.
  const double t = h.trace().real();
  if (std::abs(t - 1.0) > tol::roundoff) h /= t;
  return DensityMatrix(std::move(h), dims);
}

DensityMatrix trusted_density(ComplexMatrix mat, std::optional<BipartiteDims> dims) {
  ComplexMatrix h = hermitian_part(mat);
  h /= h.trace().real();
  return DensityMatrix(std::move(h), dims);
}

DensityMatrix with_dims(const DensityMatrix& rho, BipartiteDims dims) {
  return validate_density(rho.matrix(), dims);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return trusted_density(kron(a.matrix(), b.matrix()), BipartiteDims{a.dim(), b.dim()});
}

ComplexMatrix partial_trace(const ComplexMatrix& op, BipartiteDims dims, Subsystem keep) {
  const auto da = static_cast<Eigen::Index>(dims.dim_a);
  const auto db = static_cast<Eigen::Index>(dims.dim_b);
  if (op.rows() != da * db || op.cols() != da * db) {
    throw Error(ErrorKind::DimensionMismatch, "operator does not match bipartite dims");
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index a = 0; a < da; ++a)
      for (Eigen::Index a2 = 0; a2 < da; ++a2)
        for (Eigen::Index b = 0; b < db; ++b) out(a, a2) += op(a * db + b, a2 * db + b);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index b = 0; b < db; ++b)
    for (Eigen::Index b2 = 0; b2 < db; ++b2)
      for (Eigen::Index a = 0; a < da; ++a) out(b, b2) += op(a * db + b, a * db + b2);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  return trusted_density(partial_trace(rho.matrix(), rho.bipartite(), keep), std::nullopt);
}

}  // namespace qcorr
