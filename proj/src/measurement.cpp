#include "qcorr/measurement.hpp"

#include <cmath>
#include <string>

#include "qcorr/errors.hpp"
#include "qcorr/tolerances.hpp"

namespace qcorr {

namespace {

void require_dim(const DensityMatrix& rho, std::size_t scheme_dim) {
  const BipartiteDims& dims = rho.bipartite();
  if (dims.dim_a != scheme_dim) {
    throw Error(ErrorKind::DimensionMismatch,
                "measurement acts on dimension " + std::to_string(scheme_dim) +
                    " but subsystem A has dimension " + std::to_string(dims.dim_a));
  }
}

// Shared by both scheme types: outcome i is V_i = |k_i/|k_i|><k_i|.
MeasurementResult measure_rank_one(const DensityMatrix& rho, std::span<const ComplexVector> kets) {
  const BipartiteDims dims = rho.bipartite();
  const auto da = static_cast<Eigen::Index>(dims.dim_a);
  const auto db = static_cast<Eigen::Index>(dims.dim_b);
  const auto blocks = conditional_blocks(rho.matrix(), dims, kets);

  std::vector<MeasurementOutcome> outcomes;
  outcomes.reserve(kets.size());
  ComplexMatrix post = ComplexMatrix::Zero(da * db, da * db);
  for (std::size_t i = 0; i < kets.size(); ++i) {
    const double prob = std::max(blocks[i].trace().real(), 0.0);
    const ComplexVector unit = kets[i].normalized();
    const ComplexMatrix unnormalized = kron(projector(unit), blocks[i]);
    post += unnormalized;
    if (prob < tol::zero_probability) {
      outcomes.push_back({0.0,
                          trusted_density(ComplexMatrix::Identity(da * db, da * db), dims),
                          trusted_density(ComplexMatrix::Identity(db, db), std::nullopt),
                          true});
      continue;
    }
    outcomes.push_back({prob, trusted_density(unnormalized / prob, dims),
                        trusted_density(blocks[i] / prob, std::nullopt), false});
  }
  return {std::move(outcomes), trusted_density(std::move(post), dims)};
}

ComplexMatrix givens(std::size_t dim, std::size_t i, std::size_t j, double theta, double phi) {
  ComplexMatrix g = ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex e = std::polar(1.0, phi);
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  g(ii, ii) = c;
  g(jj, ii) = e * s;
  g(ii, jj) = -std::conj(e) * s;
  g(jj, jj) = c;
  return g;
}

}  // namespace

std::vector<ComplexMatrix> ProjectiveMeasurement::projectors() const {
  std::vector<ComplexMatrix> out;
  out.reserve(basis.size());
  for (const auto& v : basis) out.push_back(projector(v));
  return out;
}

std::vector<ComplexMatrix> RankOnePOVM::elements() const {
  std::vector<ComplexMatrix> out;
  out.reserve(kraus_vectors.size());
  for (const auto& k : kraus_vectors) out.push_back(projector(k));
  return out;
}

std::size_t projective_param_count(std::size_t dim) { return dim * dim - dim; }

ProjectiveMeasurement projectors_from_params(std::size_t dim_a, std::span<const double> params) {
  if (dim_a < 2 || params.size() != projective_param_count(dim_a)) {
    throw Error(ErrorKind::BadParamLength,
                "expected " + std::to_string(projective_param_count(dim_a)) +
                    " parameters for dimension " + std::to_string(dim_a) + ", got " +
                    std::to_string(params.size()));
  }
  const auto d = static_cast<Eigen::Index>(dim_a);
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  std::size_t next = 0;
  for (std::size_t i = 0; i + 1 < dim_a; ++i) {
    for (std::size_t j = i + 1; j < dim_a; ++j) {
      u = u * givens(dim_a, i, j, params[next], params[next + 1]);
      next += 2;
    }
  }
  ProjectiveMeasurement out;
  out.basis.reserve(dim_a);
  for (Eigen::Index c = 0; c < d; ++c) out.basis.emplace_back(u.col(c));
  return out;
}

RankOnePOVM povm_from_params(std::size_t dim_a, std::size_t m, const ComplexMatrix& raw) {
  if (m < dim_a || raw.rows() != static_cast<Eigen::Index>(m) ||
      raw.cols() != static_cast<Eigen::Index>(dim_a)) {
    throw Error(ErrorKind::BadParamLength, "POVM seed must be m x dim_a with m >= dim_a");
  }
  const ComplexMatrix gram = raw.adjoint() * raw;
  const EigenDecomposition eig = hermitian_eig(gram);
  const double smallest = std::sqrt(std::max(eig.eigenvalues.back(), 0.0));
  if (!(smallest > tol::rank)) {
    throw Error(ErrorKind::RankDeficient,
                "smallest singular value " + std::to_string(smallest), smallest);
  }
  Eigen::VectorXcd inv_sqrt(static_cast<Eigen::Index>(dim_a));
  for (std::size_t i = 0; i < dim_a; ++i) {
    inv_sqrt(static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(eig.eigenvalues[i]);
  }
  const ComplexMatrix& v = eig.eigenvectors;
  const ComplexMatrix retracted = raw * (v * inv_sqrt.asDiagonal() * v.adjoint());

  RankOnePOVM out;
  out.kraus_vectors.reserve(m);
  for (Eigen::Index r = 0; r < retracted.rows(); ++r) {
    out.kraus_vectors.emplace_back(retracted.row(r).adjoint());
  }
  return out;
}

RankOnePOVM povm_from_params(std::size_t dim_a, std::size_t m, std::span<const double> params) {
  if (params.size() != 2 * m * dim_a) {
    throw Error(ErrorKind::BadParamLength,
                "expected " + std::to_string(2 * m * dim_a) + " POVM parameters");
  }
  ComplexMatrix raw(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(dim_a));
  const std::size_t half = m * dim_a;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < dim_a; ++c) {
      raw(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(params[r * dim_a + c], params[half + r * dim_a + c]);
    }
  }
  return povm_from_params(dim_a, m, raw);
}

void check_measurement(const ProjectiveMeasurement& scheme) {
  const auto d = static_cast<Eigen::Index>(scheme.dim());
  const auto proj = scheme.projectors();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (proj[i].rows() != d) throw Error(ErrorKind::DimensionMismatch, "projector size");
    sum += proj[i];
    for (std::size_t j = 0; j < proj.size(); ++j) {
      const ComplexMatrix expect = i == j ? proj[i] : ComplexMatrix::Zero(d, d);
      const double defect = (proj[i] * proj[j] - expect).cwiseAbs().maxCoeff();
      if (defect > tol::measurement) {
        throw Error(ErrorKind::InternalInconsistency, "projectors not orthogonal", defect);
      }
    }
  }
  const double defect = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > tol::measurement) {
    throw Error(ErrorKind::InternalInconsistency, "projectors incomplete", defect);
  }
}

void check_measurement(const RankOnePOVM& scheme) {
  const auto d = static_cast<Eigen::Index>(scheme.dim());
  if (scheme.outcomes() < scheme.dim()) {
    throw Error(ErrorKind::InternalInconsistency, "POVM has fewer outcomes than dimensions");
  }
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : scheme.elements()) sum += e;
  const double defect = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > tol::measurement) {
    throw Error(ErrorKind::InternalInconsistency, "POVM incomplete", defect);
  }
}

std::vector<ComplexMatrix> conditional_blocks(const ComplexMatrix& rho, BipartiteDims dims,
                                              std::span<const ComplexVector> kets) {
  const auto da = static_cast<Eigen::Index>(dims.dim_a);
  const auto db = static_cast<Eigen::Index>(dims.dim_b);
  std::vector<ComplexMatrix> out;
  out.reserve(kets.size());
  for (const auto& k : kets) {
    ComplexMatrix block = ComplexMatrix::Zero(db, db);
    for (Eigen::Index a = 0; a < da; ++a) {
      for (Eigen::Index a2 = 0; a2 < da; ++a2) {
        const Complex w = std::conj(k(a)) * k(a2);
        if (w == Complex(0.0)) continue;
        block += w * rho.block(a * db, a2 * db, db, db);
      }
    }
    out.push_back(std::move(block));
  }
  return out;
}

MeasurementResult measure_subsystem_a(const DensityMatrix& rho,
                                      const ProjectiveMeasurement& scheme) {
  require_dim(rho, scheme.dim());
  return measure_rank_one(rho, scheme.basis);
}

MeasurementResult measure_subsystem_a(const DensityMatrix& rho, const RankOnePOVM& scheme) {
  require_dim(rho, scheme.dim());
  return measure_rank_one(rho, scheme.kraus_vectors);
}

EntropyValue conditional_entropy_measured(const DensityMatrix& rho,
                                          const ProjectiveMeasurement& scheme, LogBase base) {
  require_dim(rho, scheme.dim());
  double total = 0.0;
  for (const auto& block : conditional_blocks(rho.matrix(), rho.bipartite(), scheme.basis)) {
    const double prob = block.trace().real();
    if (prob < tol::zero_probability) continue;
    total += prob * spectrum_entropy(hermitian_eigenvalues(block / prob), LogBase::Nats);
  }
  return {from_nats(std::max(total, 0.0), base), true};
}

DecoheredState decohered_state(const DensityMatrix& rho) {
  const BipartiteDims dims = rho.bipartite();
  const EigenDecomposition eig_a = hermitian_eig(partial_trace(rho, Subsystem::A).matrix());
  const EigenDecomposition eig_b = hermitian_eig(partial_trace(rho, Subsystem::B).matrix());

  auto has_tie = [](const std::vector<double>& values) {
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      if (values[i] - values[i + 1] < tol::degeneracy) return true;
    }
    return false;
  };

  const auto n = static_cast<Eigen::Index>(dims.total());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  ProjectiveMeasurement basis_a;
  ProjectiveMeasurement basis_b;
  for (Eigen::Index a = 0; a < eig_a.eigenvectors.cols(); ++a) {
    basis_a.basis.emplace_back(eig_a.eigenvectors.col(a));
  }
  for (Eigen::Index b = 0; b < eig_b.eigenvectors.cols(); ++b) {
    basis_b.basis.emplace_back(eig_b.eigenvectors.col(b));
  }
  const auto db = static_cast<Eigen::Index>(dims.dim_b);
  for (Eigen::Index a = 0; a < eig_a.eigenvectors.cols(); ++a) {
    for (Eigen::Index b = 0; b < db; ++b) {
      const ComplexVector ket = kron(eig_a.eigenvectors.col(a), eig_b.eigenvectors.col(b));
      const double weight = (ket.adjoint() * rho.matrix() * ket)(0, 0).real();
      out += std::max(weight, 0.0) * projector(ket);
    }
  }
  return {trusted_density(std::move(out), dims), std::move(basis_a), std::move(basis_b),
          has_tie(eig_a.eigenvalues) || has_tie(eig_b.eigenvalues)};
}

}  // namespace qcorr
