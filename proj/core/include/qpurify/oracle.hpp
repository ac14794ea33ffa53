#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "qpurify/blocks.hpp"
#include "qpurify/core.hpp"

namespace qpurify {

/// Haar-random 2x2 unitary: complex Ginibre matrix, QR, diagonal phases of R
/// moved into Q.
DenseOperator haar_unitary(std::mt19937_64& rng);

/// Haar-random unit vector on the sphere.
Direction random_direction(std::mt19937_64& rng);

struct BlockMeasurement {
  double probability = 0.0;
  /// P state P / probability; empty when probability < 1e-14.
  std::optional<DenseOperator> post_state;
};

/// Projective measurement onto S_{j,alpha}.
BlockMeasurement measure_block(const DenseOperator& state, const SchurBasis& basis,
                               BlockLabel label);

/// Unnormalized output of outcome (j, alpha): swap the block back to
/// S_{j,1} and discard the trailing n - 2j singlet qubits.
DenseOperator purify_block(const DenseOperator& state, const SchurBasis& basis,
                           BlockLabel label);

/// <1_n| rho_k |1_n> for every qubit k of a normalized operator.
std::vector<double> single_qubit_fidelities(const DenseOperator& state,
                                            const StateVector& target);

/// Brute-force check of rho^{\otimes n} = sum_j p_j/d_j sum_alpha rho_{j,alpha}.
struct DecompositionReport {
  int n = 0;
  double lambda = 0.0;
  Direction direction{};
  double tolerance = 0.0;

  /// Measured tr(P_{j,alpha} rho^{\otimes n}).
  std::map<BlockLabel, double> block_probabilities;
  /// |measured - p_j/d_j|.
  std::map<BlockLabel, double> probability_residuals;
  /// Block-sum reconstruction vs the tensor power.
  double reconstruction_residual = 0.0;
  /// sum_k c0^k c1^{n-k} P_k (excitation projectors in the n basis) vs the
  /// tensor power.
  double excitation_residual = 0.0;
  /// Normalized post-measurement state vs U_{j,alpha} rho_{j,1} U_{j,alpha}^dag.
  std::map<BlockLabel, double> post_measurement_residuals;
  /// max_k |F_k - f_j| over the 2j kept qubits (j >= 1 only).
  std::map<BlockLabel, double> fidelity_residuals;

  /// First label whose residual reached the tolerance, if any.
  std::optional<BlockLabel> offending;
  bool passed = false;

  double max_residual() const;
};

DecompositionReport verify_decomposition(const MixedQubit& q, const SchurBasis& basis,
                                         double tol);

/// Rebuilds rho_j from Gauss-Legendre (cos theta) x uniform (phi) quadrature
/// of its pure-state integral representation and returns the max-element
/// residual against block_state_matrix. Needs theta_nodes >= 2j+1 and
/// phi_nodes >= 4j+1 (phi_nodes = 0 selects 4j+1); otherwise throws.
double quadrature_check(const MixedQubit& q, int j, int theta_nodes, int phi_nodes = 0,
                        int qubit_cap = kDefaultQubitCap);

/// Re-appends the discarded singlets to the purified state, applies
/// U_{j,alpha} and compares with the post-measurement state rho_{j,alpha}.
double reversibility_check(const MixedQubit& q, const SchurBasis& basis, BlockLabel label);

/// reversibility_check for every label, sharing one tensor power.
std::map<BlockLabel, double> reversibility_check_all(const MixedQubit& q, const SchurBasis& basis);

/// One branch of a purification procedure: `qubits` output qubits in an
/// unnormalized state whose trace is the branch probability.
struct ProcedureOutcome {
  int qubits = 0;
  DenseOperator output;
};

/// Maps an n-qubit density operator to its list of branches. The list layout
/// must not depend on the input.
using Procedure = std::function<std::vector<ProcedureOutcome>(const DenseOperator&)>;

/// The block-measurement protocol: one branch per label (j, alpha).
Procedure purification_procedure(const SchurBasis& basis);

/// Keeps qubit 1 and discards the rest.
Procedure keep_first_qubit_procedure();

/// max over branches of |P[(U rho U^dag)^{\otimes n}] - U^{\otimes M} P[rho^{\otimes n}] U^{dag \otimes M}|.
double covariance_residual(const Procedure& procedure, const MixedQubit& q, int n,
                           const DenseOperator& u, int qubit_cap = kDefaultQubitCap);

struct SymmetrizationRow {
  int qubits = 0;
  double symmetrized_probability = 0.0;
  double probability_std_error = 0.0;
  double raw_probability = 0.0;
  /// Fidelity entries are NaN for zero-qubit outputs.
  double symmetrized_fidelity = 0.0;
  double fidelity_std_error = 0.0;
  double raw_fidelity = 0.0;
  bool consistent = false;
};

struct SymmetrizationReport {
  std::vector<SymmetrizationRow> rows;  // one per output size M, ascending
  bool consistent = false;
};

/// Monte Carlo estimate of P_M and F_M for the symmetrized procedure (random
/// U^{\otimes n}, procedure, U^dag on the outputs, random output permutation)
/// compared with the direction-averaged P_M, F_M of the raw procedure. The
/// raw average uses product quadrature over the sphere; agreement means
/// within 3 standard errors (plus 1e-9).
SymmetrizationReport symmetrize_and_compare(const Procedure& procedure, const MixedQubit& q,
                                            int n, int samples, std::uint64_t seed,
                                            int qubit_cap = kDefaultQubitCap);

}  // namespace qpurify
