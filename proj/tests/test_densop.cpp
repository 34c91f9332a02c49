#include <Eigen/Eigenvalues>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "qcorr/densop.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/oracle.hpp"
#include "qcorr/states.hpp"

using namespace qcorr;
using qcorr::testing::diag;
using qcorr::testing::max_abs_diff;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InternalInconsistency;
}

}  // namespace

TEST_CASE("validate_density accepts valid states") {
  const DensityMatrix mixed = validate_density(ComplexMatrix::Identity(2, 2) / 2.0);
  CHECK(max_abs_diff(mixed.matrix(), ComplexMatrix::Identity(2, 2) / 2.0) == 0.0);
  CHECK_FALSE(mixed.dims().has_value());

  const DensityMatrix pure = validate_density(diag({1.0, 0.0}));
  CHECK(pure(0, 0) == Complex(1.0));
  CHECK(pure(1, 1) == Complex(0.0));
}

TEST_CASE("validate_density rejects invalid operators") {
  CHECK(kind_of([] { validate_density(diag({0.6, 0.6})); }) == ErrorKind::NotUnitTrace);

  ComplexMatrix skew = diag({0.5, 0.5});
  skew(0, 1) = Complex(0.1, 0.0);
  CHECK(kind_of([&] { validate_density(skew); }) == ErrorKind::NotHermitian);

  CHECK(kind_of([] { validate_density(diag({1.5, -0.5})); }) == ErrorKind::NotPositive);

  CHECK(kind_of([] { validate_density(ComplexMatrix::Identity(4, 4) / 4.0, BipartiteDims{2, 3}); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { validate_density(ComplexMatrix::Identity(2, 3)); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("validate_density reports the violating magnitude") {
  try {
    validate_density(diag({0.6, 0.6}));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.magnitude() == doctest::Approx(0.2));
  }
  try {
    validate_density(diag({1.25, -0.25}));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositive);
    CHECK(e.magnitude() == doctest::Approx(0.25));
  }
}

TEST_CASE("validate_density clamps tiny negatives and renormalizes") {
  const DensityMatrix rho = validate_density(diag({1.0 + 5e-11, -5e-11}));
  const auto eig = hermitian_eigenvalues(rho.matrix());
  CHECK(eig.back() >= -1e-14);
  CHECK(std::abs(rho.matrix().trace() - 1.0) <= 1e-15);

  const DensityMatrix off = validate_density(diag({0.5 + 5e-11, 0.5}));
  CHECK(std::abs(off.matrix().trace().real() - 1.0) <= 1e-15);
}

TEST_CASE("validate_density is idempotent bit for bit") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const DensityMatrix rho = oracle::random_state(seed, {2, 2}, 1 + seed % 4);
    const DensityMatrix again = validate_density(rho.matrix(), rho.dims());
    CHECK((again.matrix().array() == rho.matrix().array()).all());
  }
}

TEST_CASE("tensor_product examples") {
  const DensityMatrix half = validate_density(ComplexMatrix::Identity(2, 2) / 2.0);
  const DensityMatrix quarter = tensor_product(half, half);
  CHECK(max_abs_diff(quarter.matrix(), ComplexMatrix::Identity(4, 4) / 4.0) == 0.0);
  REQUIRE(quarter.dims());
  CHECK(*quarter.dims() == BipartiteDims{2, 2});

  const DensityMatrix zero = validate_density(diag({1.0, 0.0}));
  const DensityMatrix one = validate_density(diag({0.0, 1.0}));
  const DensityMatrix zo = tensor_product(zero, one);
  // |01> sits at index a * dim_b + b = 1
  CHECK(max_abs_diff(zo.matrix(), diag({0.0, 1.0, 0.0, 0.0})) == 0.0);

  const DensityMatrix a = oracle::random_state(3, {2, 2}, 4);
  const DensityMatrix b = validate_density(diag({0.2, 0.3, 0.5}));
  const DensityMatrix ab = tensor_product(partial_trace(a, Subsystem::A), b);
  CHECK(max_abs_diff(partial_trace(ab, Subsystem::A).matrix(),
                     partial_trace(a, Subsystem::A).matrix()) <= 1e-12);
  CHECK(max_abs_diff(partial_trace(ab, Subsystem::B).matrix(), b.matrix()) <= 1e-12);
}

TEST_CASE("partial_trace examples") {
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  CHECK(max_abs_diff(partial_trace(states::pure_bell(), Subsystem::A).matrix(), half) <= 1e-15);
  CHECK(max_abs_diff(partial_trace(states::pure_bell(), Subsystem::B).matrix(), half) <= 1e-15);
  CHECK(max_abs_diff(partial_trace(states::bell_mixture(0.75), Subsystem::A).matrix(), half) <=
        1e-15);

  const DensityMatrix no_dims = validate_density(ComplexMatrix::Identity(4, 4) / 4.0);
  CHECK(kind_of([&] { partial_trace(no_dims, Subsystem::A); }) == ErrorKind::MissingDims);
}

TEST_CASE("partial_trace respects A-major ordering on unequal dimensions") {
  // |a=1, b=2> in 2 x 3 lives at index 1 * 3 + 2 = 5
  ComplexMatrix m = ComplexMatrix::Zero(6, 6);
  m(5, 5) = 1.0;
  const DensityMatrix rho = validate_density(m, BipartiteDims{2, 3});
  CHECK(max_abs_diff(partial_trace(rho, Subsystem::A).matrix(), diag({0.0, 1.0})) == 0.0);
  CHECK(max_abs_diff(partial_trace(rho, Subsystem::B).matrix(), diag({0.0, 0.0, 1.0})) == 0.0);
}

TEST_CASE("partial traces preserve trace and invert tensor products") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t da = 2 + seed % 3;
    const std::size_t db = 2 + (seed / 3) % 3;
    const DensityMatrix rho_a = validate_density(
        ComplexMatrix(partial_trace(oracle::random_state(seed + 1000, {da, 2}, 3), Subsystem::A)
                          .matrix()));
    const DensityMatrix rho_b = validate_density(
        ComplexMatrix(partial_trace(oracle::random_state(seed + 2000, {2, db}, 3), Subsystem::B)
                          .matrix()));
    const DensityMatrix joint = tensor_product(rho_a, rho_b);
    CHECK(max_abs_diff(partial_trace(joint, Subsystem::A).matrix(), rho_a.matrix()) <= 1e-12);
    CHECK(max_abs_diff(partial_trace(joint, Subsystem::B).matrix(), rho_b.matrix()) <= 1e-12);

    const DensityMatrix r = oracle::random_state(seed, {da, db}, 1 + seed % (da * db));
    CHECK(std::abs(partial_trace(r, Subsystem::A).matrix().trace() - 1.0) <= 1e-12);
    CHECK(std::abs(partial_trace(r, Subsystem::B).matrix().trace() - 1.0) <= 1e-12);
  }
}

TEST_CASE("hermitian_eig examples") {
  const EigenDecomposition d = hermitian_eig(diag({0.25, 0.75}));
  REQUIRE(d.eigenvalues.size() == 2);
  CHECK(d.eigenvalues[0] == doctest::Approx(0.75));
  CHECK(d.eigenvalues[1] == doctest::Approx(0.25));

  ComplexMatrix x(2, 2);
  x << 0.5, 0.5, 0.5, 0.5;  // Pauli-X/2 + I/2
  const EigenDecomposition e = hermitian_eig(x);
  CHECK(e.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(std::abs(e.eigenvalues[1]) <= 1e-15);
  const double s = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(e.eigenvectors(0, 0) - s) <= 1e-14);
  CHECK(std::abs(e.eigenvectors(1, 0) - s) <= 1e-14);
  CHECK(std::abs(e.eigenvectors(0, 1) - s) <= 1e-14);
  CHECK(std::abs(e.eigenvectors(1, 1) + s) <= 1e-14);

  const auto bell = hermitian_eigenvalues(states::bell_mixture(0.75).matrix());
  REQUIRE(bell.size() == 4);
  CHECK(bell[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(bell[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::abs(bell[2]) <= 1e-15);
  CHECK(std::abs(bell[3]) <= 1e-15);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  ComplexMatrix m = diag({1.0, 2.0});
  m(0, 1) = 1.0;
  CHECK(kind_of([&] { hermitian_eig(m); }) == ErrorKind::NotHermitian);
}

TEST_CASE("hermitian_eig invariants on 1000 random Hermitian matrices") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = 1 + trial % 9;
    const ComplexMatrix h = qcorr::testing::random_hermitian(rng, n);
    const EigenDecomposition d = hermitian_eig(h);
    const ComplexMatrix& v = d.eigenvectors;
    Eigen::VectorXd lam(n);
    for (Eigen::Index i = 0; i < n; ++i) lam(i) = d.eigenvalues[static_cast<std::size_t>(i)];

    const double residual = (v * lam.cast<Complex>().asDiagonal() * v.adjoint() - h).norm();
    CHECK(residual <= 1e-10 * (1.0 + h.norm()));
    CHECK(max_abs_diff(v.adjoint() * v, ComplexMatrix::Identity(n, n)) <= 1e-10);
    CHECK(std::abs(lam.sum() - h.trace().real()) <= 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) CHECK(lam(i - 1) >= lam(i));

    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) {
        if (std::abs(v(r, c)) > 1e-8) {
          CHECK(v(r, c).real() > 0.0);
          CHECK(v(r, c).imag() == 0.0);
          break;
        }
      }
    }

    // independent reference
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(h, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(std::abs(lam(i) - ref.eigenvalues()(n - 1 - i)) <= 1e-10 * (1.0 + h.norm()));
    }
  }
}

TEST_CASE("hermitian_eig is deterministic and keeps ties in diagonal order") {
  Rng rng(7);
  const ComplexMatrix h = qcorr::testing::random_hermitian(rng, 5);
  const EigenDecomposition a = hermitian_eig(h);
  const EigenDecomposition b = hermitian_eig(h);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK((a.eigenvectors.array() == b.eigenvectors.array()).all());

  const EigenDecomposition tie = hermitian_eig(ComplexMatrix::Identity(3, 3) / 3.0);
  CHECK(max_abs_diff(tie.eigenvectors, ComplexMatrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("kron and projector") {
  ComplexMatrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  const ComplexMatrix k = kron(a, ComplexMatrix::Identity(2, 2));
  CHECK(k(0, 2) == Complex(2.0));
  CHECK(k(3, 1) == Complex(3.0));
  CHECK(k(1, 0) == Complex(0.0));

  ComplexVector v(2);
  v << Complex(0.6, 0.0), Complex(0.0, 0.8);
  const ComplexMatrix p = projector(v);
  CHECK(max_abs_diff(p * p, p) <= 1e-15);
  CHECK(std::abs(p.trace() - 1.0) <= 1e-15);
}

TEST_CASE("with_dims attaches a split") {
  const DensityMatrix flat = validate_density(ComplexMatrix::Identity(6, 6) / 6.0);
  const DensityMatrix split = with_dims(flat, {3, 2});
  CHECK(split.bipartite() == BipartiteDims{3, 2});
  CHECK(kind_of([&] { flat.bipartite(); }) == ErrorKind::MissingDims);
}
