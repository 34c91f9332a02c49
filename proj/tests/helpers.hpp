#pragma once

#include <cmath>

#include "qcorr/densop.hpp"
#include "qcorr/optimize.hpp"

namespace qcorr::testing {

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double h2(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index n) {
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return (g + g.adjoint()) / 2.0;
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                        static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

// Small budgets for unit tests; acceptance runs use the defaults.
inline OptimizerConfig quick_config(std::uint64_t seed, std::size_t restarts = 4) {
  OptimizerConfig c(seed);
  c.restarts = restarts;
  return c;
}

}  // namespace qcorr::testing
