#pragma once

#include <iosfwd>
#include <vector>

#include "qpurify/core.hpp"

namespace qpurify {

/// Symmetric state of 2j qubits with j+m ones, equal real amplitudes.
StateVector dicke_state(int j, int m);

/// |j,m,1> = dicke_state(j, m) on qubits 1..2j followed by singlets on the
/// pairs (2j+1, 2j+2), ..., (n-1, n).
StateVector seed_vector(int n, int j, int m);

/// Orthonormal basis |j,m,alpha> of an even number of qubits.
///
/// For each spin j the d_j highest-weight vectors |j,j,alpha> come from
/// Gram-Schmidt over the permutation orbit of |j,j,1> (permutations in
/// lexicographic order of one-line notation, dependent vectors dropped).
/// Lower m follow by applying the collective lowering operator, so a fixed
/// alpha spans one copy of the spin-j irrep for every m.
class SchurBasis {
 public:
  int qubits() const { return n_; }
  int max_spin() const { return n_ / 2; }
  Eigen::Index dimension() const { return Eigen::Index{1} << n_; }

  /// d_j as built (equals the closed-form multiplicity).
  int multiplicity(int j) const;

  /// |j,m,alpha>, alpha 1-based.
  StateVector vector(int j, int m, int alpha) const;

  /// Columns |j,-j,alpha>, ..., |j,j,alpha>.
  const Eigen::MatrixXcd& block(int j, int alpha) const;

  /// Every valid label, ordered by (j, alpha).
  std::vector<BlockLabel> labels() const;

  std::size_t vector_count() const;

  friend SchurBasis build_schur_basis(int n, int qubit_cap);

 private:
  void check_label(int j, int alpha) const;

  int n_ = 0;
  // blocks_[j][alpha - 1] is dimension x (2j+1).
  std::vector<std::vector<Eigen::MatrixXcd>> blocks_;
};

/// Builds the basis for even n <= qubit_cap. Throws std::invalid_argument for
/// odd or nonpositive n, SizeLimitError above the cap, and std::logic_error
/// if the orbit does not span exactly d_j highest-weight vectors.
SchurBasis build_schur_basis(int n, int qubit_cap = kDefaultQubitCap);

struct BlockProjector {
  BlockLabel label;
  DenseOperator matrix;
};

/// Sum over m of |j,m,alpha><j,m,alpha|.
BlockProjector block_projector(const SchurBasis& basis, BlockLabel label);

struct BlockSwap {
  BlockLabel label;
  DenseOperator matrix;
  /// Set when alpha = 1, where the swap is the identity.
  bool identity = false;
};

/// Unitary exchanging |j,m,alpha> and |j,m,1> for all m, identity on the
/// orthogonal complement of S_{j,1} + S_{j,alpha}.
BlockSwap block_swap(const SchurBasis& basis, BlockLabel label);

/// U_{j,alpha} M without forming U; M may be thin.
Eigen::MatrixXcd apply_block_swap(const SchurBasis& basis, BlockLabel label, const Eigen::MatrixXcd& m);

/// U_{j,alpha} X U_{j,alpha}^dag in O(dim^2 (2j+1)).
DenseOperator conjugate_by_block_swap(const SchurBasis& basis, BlockLabel label, const DenseOperator& x);

/// Debug dump, rows `j,m,alpha,basis_index,re,im` for nonzero amplitudes.
void write_basis_csv(std::ostream& out, const SchurBasis& basis);

}  // namespace qpurify
