#pragma once

#include <cstdint>
#include <optional>

#include "qpurify/core.hpp"

namespace qpurify {

/// N -> M cloning of a mixed qubit; an empty m_out means M = infinity.
struct CloneSettings {
  int n_in = 2;
  std::optional<std::int64_t> m_out;
  double lambda = 1.0;

  /// Throws std::invalid_argument on odd N, lambda outside [0, 1] or M < N.
  void validate() const;
};

/// x, y >= 0 with x + y <= 1: the covariant 2j -> 1 map sends |Psi><Psi|^{(x)2j}
/// to x |Psi><Psi| + y |Psi_perp><Psi_perp|.
struct CovariantMapParams {
  double x = 1.0;
  double y = 0.0;
};

/// Optimal pure-state 2j -> M cloning fidelity (M(2j+1) + 2j) / (M(2j+2)),
/// (2j+1)/(2j+2) for M = infinity. j = 0 gives 1/2.
double pure_cloning_fidelity(int j, std::optional<std::int64_t> m_out);

/// sum_j p_j [F_pur f_j + (1 - F_pur)(1 - f_j)]; the j = 0 block contributes
/// 1/2 (pure noise).
double mixed_cloning_fidelity(const CloneSettings& s);

/// 2 F_mix - 1.
double mixed_cloning_lambda(const CloneSettings& s);

/// lambda^mix_{N,inf} = sum_j p_j (2 f_j - 1) j / (j + 1).
double estimation_lambda(int n, double lambda);

/// |(2 F_mix(N,M) - 1) - estimation_lambda(N) (M + 2) / M|; needs finite M.
double scaling_relation_check(const CloneSettings& s);

/// Output fidelity of a covariant 2j -> 1 map applied to rho_j, obtained by
/// quadrature over the pure-state components of rho_j (exact node counts).
double covariant_map_fidelity(const MixedQubit& q, int j, const CovariantMapParams& params);

struct ScanResult {
  double best_x = 0.0;
  double best_y = 0.0;
  double best_fidelity = 0.0;
  std::size_t points = 0;
};

/// Evaluates covariant_map_fidelity on the grid x = a/(grid-1),
/// y = b/(grid-1), a + b <= grid-1, (a, b) != (0, 0), and returns the
/// maximizer (first encountered on ties). Needs grid >= 11, j >= 1.
ScanResult optimality_scan(const MixedQubit& q, int j, int grid);

}  // namespace qpurify
