#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qpurify/core.hpp"

namespace qpurify::testing {

inline Direction random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    Direction d{normal(rng), normal(rng), normal(rng)};
    const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (r > 1e-3) return {d[0] / r, d[1] / r, d[2] / r};
  }
}

inline DenseOperator random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  DenseOperator a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = complex_t(normal(rng), normal(rng));
  return 0.5 * (a + a.adjoint());
}

inline DenseOperator random_density(int dim, std::mt19937_64& rng) {
  const DenseOperator h = random_hermitian(dim, rng);
  DenseOperator rho = h * h.adjoint();
  return rho / rho.trace().real();
}

/// Independent count of d_j: lattice paths of n +-1 steps that never go
/// below zero and end at height 2j (brute force over all 2^n strings).
inline std::uint64_t ballot_paths(int n, int j) {
  std::uint64_t count = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    int h = 0;
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      h += ((s >> k) & 1U) ? 1 : -1;
      ok = h >= 0;
    }
    if (ok && h == 2 * j) ++count;
  }
  return count;
}

}  // namespace qpurify::testing
