#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qpurify {

using complex_t = std::complex<double>;

/// Dense complex square matrix: density operators, projectors, unitaries.
using DenseOperator = Eigen::MatrixXcd;
/// Dense complex amplitude vector in the computational basis.
using StateVector = Eigen::VectorXcd;

using Direction = std::array<double, 3>;

/// Largest register the dense routines will build (2^12 = 4096 dimensions).
inline constexpr int kDefaultQubitCap = 12;

/// Raised when a dense object would exceed the configured qubit cap.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A qubit with Bloch vector lambda * direction.
///
/// Eigenvalues are c1 = (1 + lambda) / 2 on |1_n> and c0 = (1 - lambda) / 2
/// on |0_n>. The direction is normalized on construction.
class MixedQubit {
 public:
  MixedQubit(double lambda, const Direction& direction);
  explicit MixedQubit(double lambda) : MixedQubit(lambda, {0.0, 0.0, 1.0}) {}

  double lambda() const { return lambda_; }
  const Direction& direction() const { return direction_; }
  double c1() const { return 0.5 * (1.0 + lambda_); }
  double c0() const { return 0.5 * (1.0 - lambda_); }

 private:
  double lambda_;
  Direction direction_;
};

/// Label of the invariant subspace S_{j,alpha}; alpha is 1-based.
struct BlockLabel {
  int j = 0;
  int alpha = 1;

  friend auto operator<=>(const BlockLabel&, const BlockLabel&) = default;
};

std::string to_string(const BlockLabel& label);

// Single-qubit algebra. Basis ordering is |0> -> index 0, |1> -> index 1,
// and |1> is the +1 eigenstate of sigma_z.

/// Returns (|1_n>, |0_n>) for the qubit's direction.
///
/// Phase convention: the |1> coefficient of |1_n> is real and nonnegative
/// (the |0> coefficient when the former vanishes); the |0> coefficient of
/// |0_n> is real and nonnegative (likewise falling back to |1>).
std::pair<StateVector, StateVector> qubit_eigenstates(const MixedQubit& q);

/// Unitary with columns (|0_n>, |1_n>), i.e. it maps |i> to |i_n>.
DenseOperator rotation_to(const Direction& direction);

/// rho = (1 + lambda n.sigma) / 2 as a 2x2 matrix.
DenseOperator density_matrix(const MixedQubit& q);

// Multi-qubit algebra. Qubit 1 is the most significant bit of the index.

/// Number of qubits of a 2^n-dimensional operator; throws if dim is not a
/// power of two.
int qubit_count(Eigen::Index dim);

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);
StateVector kron(const StateVector& a, const StateVector& b);

/// a^{\otimes n}. Throws SizeLimitError when the result would span more than
/// `qubit_cap` qubits.
DenseOperator kron_power(const DenseOperator& a, int n,
                         int qubit_cap = kDefaultQubitCap);
StateVector kron_power(const StateVector& v, int n,
                       int qubit_cap = kDefaultQubitCap);

/// Reduced operator on the qubits in `keep` (1-based, any order, kept in
/// ascending order in the result). An empty set returns the 1x1 trace.
DenseOperator partial_trace(const DenseOperator& a, std::vector<int> keep);

/// Applies the same 2x2 unitary to every qubit of `v`.
StateVector apply_to_each_qubit(const DenseOperator& u, const StateVector& v);

/// Relabels qubits: qubit k of the input becomes qubit perm[k-1] of the
/// output (perm is a 1-based permutation of 1..n).
DenseOperator permute_qubits(const DenseOperator& a,
                             const std::vector<int>& perm);

/// Largest |a_ij - b_ij|.
double max_abs_diff(const DenseOperator& a, const DenseOperator& b);
/// Largest |a_ij - conj(a_ji)|.
double hermiticity_residual(const DenseOperator& a);

/// <psi| a |psi> for a 2x2 operator, real part.
double expectation(const DenseOperator& a, const StateVector& psi);

/// Singlet (|01> - |10>) / sqrt(2).
StateVector singlet();

}  // namespace qpurify
