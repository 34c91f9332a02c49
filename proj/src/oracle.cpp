#include "qcorr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qcorr/errors.hpp"
#include "qcorr/optimize.hpp"

namespace qcorr::oracle {

namespace {

double entropy_bits(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double l = solver.eigenvalues()(i);
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

}  // namespace

double grid_discord_qubit(const DensityMatrix& rho, const GridSpec& grid) {
  const BipartiteDims dims = rho.bipartite();
  if (dims.dim_a != 2) {
    throw Error(ErrorKind::WrongDimension,
                "grid oracle needs a qubit A, got dimension " + std::to_string(dims.dim_a));
  }
  if (grid.n_theta < 2 || grid.n_phi < 2) {
    throw Error(ErrorKind::OutOfRange, "grid needs at least 2 points per axis");
  }
  const auto db = static_cast<Eigen::Index>(dims.dim_b);
  const ComplexMatrix& m = rho.matrix();
  // rho = [[R00, R01], [R10, R11]] in A-blocks of size db.
  const ComplexMatrix r00 = m.block(0, 0, db, db);
  const ComplexMatrix r01 = m.block(0, db, db, db);
  const ComplexMatrix r10 = m.block(db, 0, db, db);
  const ComplexMatrix r11 = m.block(db, db, db, db);

  const double s_ab = entropy_bits(m);
  ComplexMatrix rho_a(2, 2);
  rho_a << r00.trace(), r01.trace(), r10.trace(), r11.trace();
  const double s_a = entropy_bits(rho_a);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.n_theta; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(grid.n_theta - 1);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    for (std::size_t j = 0; j < grid.n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(grid.n_phi);
      const Complex e = std::polar(1.0, phi);
      // <v|rho|v>_A for v = (c, e s) and its complement (-conj(e) s, c).
      const ComplexMatrix first =
          c * c * r00 + s * s * r11 + c * s * (e * r01 + std::conj(e) * r10);
      const ComplexMatrix second =
          s * s * r00 + c * c * r11 - c * s * (e * r01 + std::conj(e) * r10);
      double measured = 0.0;
      for (const ComplexMatrix* block : {&first, &second}) {
        const double p = block->trace().real();
        if (p < 1e-12) continue;
        measured += p * entropy_bits(*block / p);
      }
      best = std::min(best, measured);
    }
  }
  return best - (s_ab - s_a);
}

double binary_entropy(double p) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

BellMixtureValues bell_mixture_closed_forms(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "p must lie in [0, 1], got " + std::to_string(p), p);
  }
  const double h = binary_entropy(p);
  const double q = 1.0 - h;
  return {q, q, q, q, 2.0 - h};
}

DensityMatrix random_state(std::uint64_t seed, BipartiteDims dims, std::size_t rank) {
  const std::size_t n = dims.total();
  if (rank < 1 || rank > n) {
    throw Error(ErrorKind::BadRank, "rank " + std::to_string(rank) + " outside [1, " +
                                        std::to_string(n) + "]");
  }
  Rng rng(seed);
  ComplexMatrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rank));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  const ComplexMatrix rho = g * g.adjoint();
  return validate_density(rho / rho.trace().real(), dims);
}

DensityMatrix random_separable(std::uint64_t seed, BipartiteDims dims, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::BadRank, "separable sample needs k >= 1");
  Rng rng(seed);
  const AnsatzLayout layout(dims, k);
  return ansatz_to_state(layout.decode(layout.random_params(rng)));
}

ComplexMatrix random_unitary(std::uint64_t seed, std::size_t dim) {
  Rng rng(seed);
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

}  // namespace qcorr::oracle
