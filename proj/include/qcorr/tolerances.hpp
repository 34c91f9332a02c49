#pragma once

// Numerical thresholds shared by every module. Change them here only.
namespace qcorr::tol {

// Hermiticity, unit trace and positivity checks on input operators.
inline constexpr double validation = 1e-10;
// Exact algebraic identities (partial-trace round trips, trace preservation).
inline constexpr double identity = 1e-12;
// First eigenvector component above this modulus is made real positive.
inline constexpr double phase = 1e-8;
// Eigenvalues below this are treated as outside the support.
inline constexpr double support = 1e-10;
// Default eigenvalue floor for optimizer objectives.
inline constexpr double floor_eps = 1e-12;
// Measurement completeness and orthogonality.
inline constexpr double measurement = 1e-9;
// Outcomes with smaller probability are flagged degenerate.
inline constexpr double zero_probability = 1e-12;
// Smallest singular value accepted for a POVM seed matrix.
inline constexpr double rank = 1e-8;
// Marginal eigenvalues closer than this count as a tie.
inline constexpr double degeneracy = 1e-8;
// Floating-point noise: smaller negative eigenvalues and trace errors are left alone.
inline constexpr double roundoff = 1e-14;
// Measure values in [-clamp, 0) are reported as 0.
inline constexpr double clamp = 1e-9;

}  // namespace qcorr::tol
