#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Dimensions of a bipartite system. Composite indices are A-major:
/// index = a * dim_b + b.
struct BipartiteDims {
  std::size_t dim_a = 2;
  std::size_t dim_b = 2;

  std::size_t total() const noexcept { return dim_a * dim_b; }
  bool operator==(const BipartiteDims&) const = default;
};

enum class Subsystem { A, B };

/// A validated density operator: Hermitian, unit trace, positive
/// semidefinite. Only `validate_density` (and the operations built on it)
/// can produce one, so every instance satisfies the invariants.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const std::optional<BipartiteDims>& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }

  /// Throws MissingDims when the state carries no bipartite split.
  const BipartiteDims& bipartite() const;

  Complex operator()(std::size_t i, std::size_t j) const {
    return mat_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  DensityMatrix(ComplexMatrix mat, std::optional<BipartiteDims> dims)
      : mat_(std::move(mat)), dims_(dims) {}

  friend DensityMatrix validate_density(const ComplexMatrix&, std::optional<BipartiteDims>);
  friend DensityMatrix trusted_density(ComplexMatrix, std::optional<BipartiteDims>);

  ComplexMatrix mat_;
  std::optional<BipartiteDims> dims_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // columns, orthonormal
};

/// Checks the three density-operator invariants and returns the validated
/// state. The matrix is symmetrized, eigenvalues in [-1e-10, -1e-14) are
/// clamped to zero, and the trace is renormalized when it is off by more than
/// 1e-14. Validating an already valid state returns it bit for bit.
DensityMatrix validate_density(const ComplexMatrix& mat,
                               std::optional<BipartiteDims> dims = std::nullopt);

/// Wraps a matrix that is a density operator by construction (convex sums of
/// projectors, Kronecker products of valid states). Hermitian-symmetrizes and
/// rescales the trace but skips the eigenvalue check.
DensityMatrix trusted_density(ComplexMatrix mat, std::optional<BipartiteDims> dims);

DensityMatrix with_dims(const DensityMatrix& rho, BipartiteDims dims);

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Marginal on the `keep` subsystem.
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

/// Raw partial trace on an arbitrary square operator, no validation.
ComplexMatrix partial_trace(const ComplexMatrix& op, BipartiteDims dims, Subsystem keep);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Cyclic complex Jacobi eigensolver. Eigenvalues come back sorted
/// descending (ties keep their original diagonal order); each eigenvector's
/// first component with modulus > 1e-8 is real and positive.
EigenDecomposition hermitian_eig(const ComplexMatrix& h);

/// Eigenvalues only; same algorithm, skips the eigenvector accumulation.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

double hermiticity_defect(const ComplexMatrix& m);

ComplexMatrix projector(const ComplexVector& v);

}  // namespace qcorr
