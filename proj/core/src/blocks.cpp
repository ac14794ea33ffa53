#include "qpurify/blocks.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "qpurify/analytics.hpp"

namespace qpurify {

namespace {

constexpr double kDependentNormSquared = 1e-8;

std::size_t binomial_size(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / i;
  return r;
}

// Enumerates the distinct highest-weight orbit members Pi|j,j,1>, skipping
// permutations that only reorder the Dicke qubits, swap qubits within a
// singlet (a sign flip), or reorder the singlet pairs. Each coset is visited
// through its lexicographically smallest permutation and cosets come in the
// lexicographic order of those representatives, which is the order in which
// a plain lexicographic sweep over all n! permutations first meets them.
//
// The callback receives the one-line notation (image position of each qubit)
// and returns false to stop.
class OrbitEnumerator {
 public:
  OrbitEnumerator(int n, int j, std::function<bool(const std::vector<int>&)> visit)
      : n_(n), ones_(2 * j), visit_(std::move(visit)), image_(n), used_(n, false) {}

  void run() { choose_ones(0, 0); }

 private:
  // Fills image_[0..ones_) with an increasing sequence.
  bool choose_ones(int slot, int start) {
    if (slot == ones_) return pair_up(ones_);
    for (int pos = start; pos < n_; ++pos) {
      image_[slot] = pos;
      used_[pos] = true;
      const bool keep_going = choose_ones(slot + 1, pos + 1);
      used_[pos] = false;
      if (!keep_going) return false;
    }
    return true;
  }

  // Pairs the remaining positions; each pair starts at the smallest free one.
  bool pair_up(int slot) {
    if (slot == n_) return visit_(image_);
    int first = 0;
    while (used_[first]) ++first;
    used_[first] = true;
    image_[slot] = first;
    for (int second = first + 1; second < n_; ++second) {
      if (used_[second]) continue;
      used_[second] = true;
      image_[slot + 1] = second;
      const bool keep_going = pair_up(slot + 2);
      used_[second] = false;
      if (!keep_going) {
        used_[first] = false;
        return false;
      }
    }
    used_[first] = false;
    return true;
  }

  int n_;
  int ones_;
  std::function<bool(const std::vector<int>&)> visit_;
  std::vector<int> image_;
  std::vector<bool> used_;
};

// Highest-weight vectors for spin j, orthonormalized inside the subspace of
// bit strings with J+j ones. Returns full-dimension real coefficients.
std::vector<Eigen::VectorXd> highest_weight_vectors(int n, int j, int expected) {
  const int spin_max = n / 2;
  const int weight = spin_max + j;
  const Eigen::Index dim = Eigen::Index{1} << n;

  std::vector<int> compressed(static_cast<std::size_t>(dim), -1);
  std::vector<Eigen::Index> expanded;
  expanded.reserve(binomial_size(n, weight));
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    if (__builtin_popcountll(static_cast<unsigned long long>(idx)) == weight) {
      compressed[idx] = static_cast<int>(expanded.size());
      expanded.push_back(idx);
    }
  }
  const auto sub_dim = static_cast<Eigen::Index>(expanded.size());

  const int pairs = spin_max - j;
  const double amplitude = std::pow(2.0, -0.5 * pairs);
  Eigen::MatrixXd found(sub_dim, expected);
  int count = 0;
  Eigen::VectorXd candidate(sub_dim);

  auto bit = [n](int position) { return Eigen::Index{1} << (n - 1 - position); };

  OrbitEnumerator orbit(n, j, [&](const std::vector<int>& image) {
    candidate.setZero();
    Eigen::Index ones_mask = 0;
    for (int k = 0; k < 2 * j; ++k) ones_mask |= bit(image[k]);
    // Each singlet pair contributes |01> (+) or |10> (-).
    for (unsigned choice = 0; choice < (1U << pairs); ++choice) {
      Eigen::Index idx = ones_mask;
      double sign = 1.0;
      for (int p = 0; p < pairs; ++p) {
        const int first = image[2 * j + 2 * p];
        const int second = image[2 * j + 2 * p + 1];
        if ((choice >> p) & 1U) {
          idx |= bit(first);
          sign = -sign;
        } else {
          idx |= bit(second);
        }
      }
      candidate(compressed[idx]) += sign * amplitude;
    }
    // Two projection passes keep the result orthogonal to working precision.
    for (int pass = 0; pass < 2 && count > 0; ++pass) {
      const auto basis = found.leftCols(count);
      candidate -= basis * (basis.transpose() * candidate);
    }
    const double norm_sq = candidate.squaredNorm();
    if (norm_sq >= kDependentNormSquared) {
      if (count == expected) {
        throw std::logic_error("spin " + std::to_string(j) +
                               " orbit spans more than d_j vectors");
      }
      found.col(count++) = candidate / std::sqrt(norm_sq);
    }
    return count < expected;
  });
  orbit.run();

  if (count != expected) {
    throw std::logic_error("spin " + std::to_string(j) + " orbit spans " +
                           std::to_string(count) + " vectors, expected " +
                           std::to_string(expected));
  }

  std::vector<Eigen::VectorXd> out;
  out.reserve(expected);
  for (int a = 0; a < expected; ++a) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index s = 0; s < sub_dim; ++s) full(expanded[s]) = found(s, a);
    out.push_back(std::move(full));
  }
  return out;
}

// Collective lowering sum_k sigma^-_k, with sigma^-|1> = |0>.
Eigen::VectorXd lower(const Eigen::VectorXd& v, int n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
    if (v(idx) == 0.0) continue;
    for (int b = 0; b < n; ++b) {
      const Eigen::Index mask = Eigen::Index{1} << b;
      if (idx & mask) out(idx & ~mask) += v(idx);
    }
  }
  return out;
}

}  // namespace

StateVector dicke_state(int j, int m) {
  if (j < 0 || m < -j || m > j) {
    throw std::invalid_argument("dicke_state: need j >= 0 and |m| <= j");
  }
  const int qubits = 2 * j;
  const int ones = j + m;
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  const double amp = 1.0 / std::sqrt(static_cast<double>(binomial_size(qubits, ones)));
  StateVector v = StateVector::Zero(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    if (__builtin_popcountll(static_cast<unsigned long long>(idx)) == ones) v(idx) = amp;
  }
  return v;
}

StateVector seed_vector(int n, int j, int m) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("seed_vector: n must be even and positive");
  if (j < 0 || 2 * j > n) throw std::invalid_argument("seed_vector: need 0 <= j <= n/2");
  StateVector v = dicke_state(j, m);
  const StateVector s = singlet();
  for (int p = 0; p < n / 2 - j; ++p) v = kron(v, s);
  return v;
}

SchurBasis build_schur_basis(int n, int qubit_cap) {
  if (n <= 0 || n % 2 != 0) {
    throw std::invalid_argument("N must be even (odd registers are not supported)");
  }
  if (n > qubit_cap) {
    throw SizeLimitError("Schur basis of " + std::to_string(n) +
                         " qubits exceeds the cap of " + std::to_string(qubit_cap));
  }
  SchurBasis basis;
  basis.n_ = n;
  const int spin_max = n / 2;
  basis.blocks_.resize(spin_max + 1);
  for (int j = 0; j <= spin_max; ++j) {
    const auto d = static_cast<int>(multiplicity(n, j));
    const auto tops = highest_weight_vectors(n, j, d);
    auto& copies = basis.blocks_[j];
    copies.reserve(d);
    for (const auto& top : tops) {
      Eigen::MatrixXd cols(top.size(), 2 * j + 1);
      cols.col(2 * j) = top;
      for (int m = j; m > -j; --m) {
        Eigen::VectorXd next = lower(cols.col(m + j), n);
        cols.col(m + j - 1) = next / next.norm();
      }
      copies.emplace_back(cols.cast<complex_t>());
    }
  }
  return basis;
}

void SchurBasis::check_label(int j, int alpha) const {
  if (j < 0 || j > max_spin()) {
    throw std::invalid_argument("spin j=" + std::to_string(j) + " out of range");
  }
  if (alpha < 1 || alpha > static_cast<int>(blocks_[j].size())) {
    throw std::invalid_argument("alpha=" + std::to_string(alpha) +
                                " out of range for j=" + std::to_string(j));
  }
}

int SchurBasis::multiplicity(int j) const {
  if (j < 0 || j > max_spin()) throw std::invalid_argument("spin out of range");
  return static_cast<int>(blocks_[j].size());
}

StateVector SchurBasis::vector(int j, int m, int alpha) const {
  check_label(j, alpha);
  if (m < -j || m > j) throw std::invalid_argument("m out of range");
  return blocks_[j][alpha - 1].col(m + j);
}

const Eigen::MatrixXcd& SchurBasis::block(int j, int alpha) const {
  check_label(j, alpha);
  return blocks_[j][alpha - 1];
}

std::vector<BlockLabel> SchurBasis::labels() const {
  std::vector<BlockLabel> out;
  for (int j = 0; j <= max_spin(); ++j) {
    for (int a = 1; a <= multiplicity(j); ++a) out.push_back({j, a});
  }
  return out;
}

std::size_t SchurBasis::vector_count() const {
  std::size_t total = 0;
  for (int j = 0; j <= max_spin(); ++j) total += blocks_[j].size() * (2 * j + 1);
  return total;
}

BlockProjector block_projector(const SchurBasis& basis, BlockLabel label) {
  const auto& v = basis.block(label.j, label.alpha);
  return {label, v * v.adjoint()};
}

BlockSwap block_swap(const SchurBasis& basis, BlockLabel label) {
  const auto& target = basis.block(label.j, label.alpha);
  const auto dim = basis.dimension();
  if (label.alpha == 1) {
    return {label, DenseOperator::Identity(dim, dim), true};
  }
  const auto& first = basis.block(label.j, 1);
  DenseOperator u = DenseOperator::Identity(dim, dim);
  u -= first * first.adjoint();
  u -= target * target.adjoint();
  u += first * target.adjoint();
  u += target * first.adjoint();
  return {label, std::move(u), false};
}

void write_basis_csv(std::ostream& out, const SchurBasis& basis) {
  out << "j,m,alpha,basis_index,re,im\n";
  const auto old_precision = out.precision(17);
  for (const auto& label : basis.labels()) {
    const auto& cols = basis.block(label.j, label.alpha);
    for (int m = -label.j; m <= label.j; ++m) {
      for (Eigen::Index i = 0; i < cols.rows(); ++i) {
        const complex_t a = cols(i, m + label.j);
        if (a == complex_t(0.0)) continue;
        out << label.j << ',' << m << ',' << label.alpha << ',' << i << ','
            << a.real() << ',' << a.imag() << '\n';
      }
    }
  }
  out.precision(old_precision);
}

// U M for the block swap U = I + W K W^dag, W = [V_1 V_alpha],
// K = [[-1, 1], [1, -1]], without forming U.
Eigen::MatrixXcd apply_block_swap(const SchurBasis& basis, BlockLabel label, const Eigen::MatrixXcd& m) {
  if (label.alpha == 1) return m;
  const auto& v1 = basis.block(label.j, 1);
  const auto& va = basis.block(label.j, label.alpha);
  const Eigen::MatrixXcd a1 = v1.adjoint() * m;
  const Eigen::MatrixXcd aa = va.adjoint() * m;
  return m + v1 * (aa - a1) + va * (a1 - aa);
}

DenseOperator conjugate_by_block_swap(const SchurBasis& basis, BlockLabel label, const DenseOperator& x) {
  if (label.alpha == 1) return x;
  const auto& v1 = basis.block(label.j, 1);
  const auto& va = basis.block(label.j, label.alpha);
  const Eigen::Index r = v1.cols();
  Eigen::MatrixXcd w(v1.rows(), 2 * r);
  w << v1, va;
  // K W^dag X and X W K.
  const Eigen::MatrixXcd wx = w.adjoint() * x;
  Eigen::MatrixXcd kwx(2 * r, x.cols());
  kwx.topRows(r) = wx.bottomRows(r) - wx.topRows(r);
  kwx.bottomRows(r) = -kwx.topRows(r);
  const Eigen::MatrixXcd xw = x * w;
  Eigen::MatrixXcd xwk(x.rows(), 2 * r);
  xwk.leftCols(r) = xw.rightCols(r) - xw.leftCols(r);
  xwk.rightCols(r) = -xwk.leftCols(r);
  const Eigen::MatrixXcd middle = kwx * w;  // K W^dag X W
  Eigen::MatrixXcd middle_k(2 * r, 2 * r);
  middle_k.leftCols(r) = middle.rightCols(r) - middle.leftCols(r);
  middle_k.rightCols(r) = -middle_k.leftCols(r);
  DenseOperator out = x;
  out.noalias() += w * kwx;
  out.noalias() += xwk * w.adjoint();
  out.noalias() += (w * middle_k) * w.adjoint();
  return out;
}

}  // namespace qpurify
