#include "qcorr/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kMutualInfoAgreement = 1e-9;

double expectation(const ComplexMatrix& op, const ComplexMatrix& vectors, Eigen::Index col) {
  return (vectors.col(col).adjoint() * op * vectors.col(col))(0, 0).real();
}

// <v_j| op |v_j> for every column v_j.
Eigen::VectorXd expectations(const ComplexMatrix& op, const ComplexMatrix& vectors) {
  const ComplexMatrix applied = op * vectors;
  return vectors.conjugate().cwiseProduct(applied).colwise().sum().real().transpose();
}

void require_same_dim(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "relative entropy between " + std::to_string(rho.dim()) + " and " +
                    std::to_string(sigma.dim()) + " dimensional states");
  }
}

EntropyValue wrap(double nats, LogBase base) {
  if (!std::isfinite(nats)) return EntropyValue::infinite();
  return {from_nats(nats, base), true};
}

}  // namespace

double from_nats(double nats, LogBase base) noexcept {
  return base == LogBase::Nats ? nats : nats / std::numbers::ln2;
}

double shannon_entropy(std::span<const double> probabilities, LogBase base) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return from_nats(h, base);
}

double spectrum_entropy(std::span<const double> eigenvalues, LogBase base) {
  return shannon_entropy(eigenvalues, base);
}

EntropyValue von_neumann_entropy(const DensityMatrix& rho, LogBase base) {
  const auto spectrum = hermitian_eigenvalues(rho.matrix());
  return {std::max(spectrum_entropy(spectrum, base), 0.0), true};
}

RelativeEntropyFrom::RelativeEntropyFrom(const DensityMatrix& rho)
    : rho_(rho.matrix()), rho_eig_(hermitian_eig(rho.matrix())) {
  rho_log_rho_ = -spectrum_entropy(rho_eig_.eigenvalues, LogBase::Nats);
}

double RelativeEntropyFrom::exact_nats(const ComplexMatrix& sigma) const {
  const EigenDecomposition sig = hermitian_eig(sigma);
  // Every significant eigenvector of rho must see sigma.
  for (std::size_t i = 0; i < rho_eig_.eigenvalues.size(); ++i) {
    if (rho_eig_.eigenvalues[i] <= tol::support) continue;
    const double seen = expectation(sigma, rho_eig_.eigenvectors, static_cast<Eigen::Index>(i));
    if (seen < tol::support) return std::numeric_limits<double>::infinity();
  }
  const Eigen::VectorXd weights = expectations(rho_, sig.eigenvectors);
  double cross = 0.0;
  for (std::size_t j = 0; j < sig.eigenvalues.size(); ++j) {
    const double weight = weights(static_cast<Eigen::Index>(j));
    const double mu = sig.eigenvalues[j];
    if (mu <= tol::support) {
      // rho leaking into the kernel of sigma
      if (weight > tol::support) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log(mu);
  }
  return rho_log_rho_ - cross;
}

double RelativeEntropyFrom::floored_nats(const ComplexMatrix& sigma, double eps) const {
  const EigenDecomposition sig = hermitian_eig(sigma);
  double norm = 0.0;
  for (double mu : sig.eigenvalues) norm += std::max(mu, eps);
  const Eigen::VectorXd weights = expectations(rho_, sig.eigenvectors);
  double cross = 0.0;
  for (std::size_t j = 0; j < sig.eigenvalues.size(); ++j) {
    const double weight = weights(static_cast<Eigen::Index>(j));
    cross += weight * std::log(std::max(sig.eigenvalues[j], eps) / norm);
  }
  return rho_log_rho_ - cross;
}

EntropyValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                              LogBase base) {
  require_same_dim(rho, sigma);
  return wrap(RelativeEntropyFrom(rho).exact_nats(sigma.matrix()), base);
}

EntropyValue relative_entropy_floored(const DensityMatrix& rho, const DensityMatrix& sigma,
                                      double eps, LogBase base) {
  require_same_dim(rho, sigma);
  if (!(eps > 0.0)) throw Error(ErrorKind::OutOfRange, "floor eps must be positive", eps);
  return wrap(RelativeEntropyFrom(rho).floored_nats(sigma.matrix(), eps), base);
}

EntropyValue mutual_information(const DensityMatrix& rho, LogBase base) {
  const DensityMatrix rho_a = partial_trace(rho, Subsystem::A);
  const DensityMatrix rho_b = partial_trace(rho, Subsystem::B);
  const double s_a = von_neumann_entropy(rho_a, LogBase::Nats).value;
  const double s_b = von_neumann_entropy(rho_b, LogBase::Nats).value;
  const double s_ab = von_neumann_entropy(rho, LogBase::Nats).value;
  const double by_sum = s_a + s_b - s_ab;

  const DensityMatrix product = tensor_product(rho_a, rho_b);
  const double by_divergence = RelativeEntropyFrom(rho).exact_nats(product.matrix());
  if (!(std::abs(by_divergence - by_sum) <= kMutualInfoAgreement)) {
    throw Error(ErrorKind::InternalInconsistency,
                "mutual information routes disagree: " + std::to_string(by_divergence) +
                    " vs " + std::to_string(by_sum),
                std::abs(by_divergence - by_sum));
  }
  return {from_nats(std::max(by_divergence, 0.0), base), true};
}

EntropyValue conditional_entropy_vn(const DensityMatrix& rho, LogBase base) {
  const DensityMatrix rho_a = partial_trace(rho, Subsystem::A);
  const double s_ab = von_neumann_entropy(rho, LogBase::Nats).value;
  const double s_a = von_neumann_entropy(rho_a, LogBase::Nats).value;
  return {from_nats(s_ab - s_a, base), true};
}

}  // namespace qcorr
