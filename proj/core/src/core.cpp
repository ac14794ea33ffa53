#include "qpurify/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qpurify {

namespace {

// Bit position of 1-based qubit k in an n-qubit index (qubit 1 is the MSB).
inline int bit_of(int k, int n) { return n - k; }

void check_cap(int qubits, int cap) {
  if (qubits > cap) {
    throw SizeLimitError("dense object of " + std::to_string(qubits) +
                         " qubits exceeds the cap of " + std::to_string(cap));
  }
}

}  // namespace

MixedQubit::MixedQubit(double lambda, const Direction& direction)
    : lambda_(lambda), direction_(direction) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  const double norm = std::sqrt(direction[0] * direction[0] +
                                direction[1] * direction[1] +
                                direction[2] * direction[2]);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("direction must be a nonzero finite vector");
  }
  for (auto& c : direction_) c /= norm;
}

std::string to_string(const BlockLabel& label) {
  return "(j=" + std::to_string(label.j) +
         ",alpha=" + std::to_string(label.alpha) + ")";
}

DenseOperator rotation_to(const Direction& n) {
  // |1_n> = cos(t/2)|1> + e^{i phi} sin(t/2)|0>, with cos(t/2) >= 0.
  const double cos_half = std::sqrt(std::max(0.0, 0.5 * (1.0 + n[2])));
  complex_t one_on_zero;  // coefficient of |0> in |1_n>
  complex_t one_on_one;   // coefficient of |1> in |1_n>
  if (cos_half > 0.0) {
    one_on_one = cos_half;
    one_on_zero = complex_t(n[0], n[1]) / (2.0 * cos_half);
  } else {
    one_on_one = 0.0;
    one_on_zero = 1.0;
  }
  // |0_n> is orthogonal to |1_n>; pick it with a real |0> coefficient.
  complex_t zero_on_zero = std::conj(one_on_one);
  complex_t zero_on_one = -std::conj(one_on_zero);
  if (std::abs(zero_on_zero) == 0.0) {
    // Fall back to a real nonnegative |1> coefficient.
    const complex_t phase = std::abs(zero_on_one) > 0.0
                                ? std::conj(zero_on_one) / std::abs(zero_on_one)
                                : complex_t(1.0);
    zero_on_one *= phase;
  }

  DenseOperator u(2, 2);
  u(0, 0) = zero_on_zero;
  u(1, 0) = zero_on_one;
  u(0, 1) = one_on_zero;
  u(1, 1) = one_on_one;
  return u;
}

std::pair<StateVector, StateVector> qubit_eigenstates(const MixedQubit& q) {
  const DenseOperator u = rotation_to(q.direction());
  return {u.col(1), u.col(0)};
}

DenseOperator density_matrix(const MixedQubit& q) {
  const auto& n = q.direction();
  const double lam = q.lambda();
  DenseOperator rho(2, 2);
  rho(0, 0) = 0.5 * (1.0 - lam * n[2]);
  rho(1, 1) = 0.5 * (1.0 + lam * n[2]);
  rho(0, 1) = 0.5 * lam * complex_t(n[0], n[1]);
  rho(1, 0) = 0.5 * lam * complex_t(n[0], -n[1]);
  return rho;
}

int qubit_count(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

StateVector kron(const StateVector& a, const StateVector& b) {
  StateVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

DenseOperator kron_power(const DenseOperator& a, int n, int qubit_cap) {
  if (n < 1) throw std::invalid_argument("kron_power needs n >= 1");
  const int per_factor = qubit_count(a.rows());
  check_cap(per_factor * n, qubit_cap);
  DenseOperator out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

StateVector kron_power(const StateVector& v, int n, int qubit_cap) {
  if (n < 1) throw std::invalid_argument("kron_power needs n >= 1");
  const int per_factor = qubit_count(v.size());
  check_cap(per_factor * n, qubit_cap);
  StateVector out = v;
  for (int k = 1; k < n; ++k) out = kron(out, v);
  return out;
}

DenseOperator partial_trace(const DenseOperator& a, std::vector<int> keep) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("partial_trace needs a square operator");
  }
  const int n = qubit_count(a.rows());
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw std::invalid_argument("partial_trace: duplicate qubit index");
  }
  for (int k : keep) {
    if (k < 1 || k > n) {
      throw std::invalid_argument("partial_trace: qubit index " +
                                  std::to_string(k) + " out of range 1.." +
                                  std::to_string(n));
    }
  }
  std::vector<int> traced;
  for (int k = 1; k <= n; ++k) {
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  }

  const int kept_count = static_cast<int>(keep.size());
  const int traced_count = static_cast<int>(traced.size());
  auto scatter = [n](const std::vector<int>& qubits, std::size_t local) {
    std::size_t full = 0;
    const int m = static_cast<int>(qubits.size());
    for (int i = 0; i < m; ++i) {
      if ((local >> (m - 1 - i)) & 1U) full |= std::size_t{1} << bit_of(qubits[i], n);
    }
    return full;
  };

  const std::size_t kept_dim = std::size_t{1} << kept_count;
  const std::size_t traced_dim = std::size_t{1} << traced_count;
  std::vector<std::size_t> kept_offsets(kept_dim), traced_offsets(traced_dim);
  for (std::size_t r = 0; r < kept_dim; ++r) kept_offsets[r] = scatter(keep, r);
  for (std::size_t t = 0; t < traced_dim; ++t) traced_offsets[t] = scatter(traced, t);

  DenseOperator out = DenseOperator::Zero(kept_dim, kept_dim);
  for (std::size_t t = 0; t < traced_dim; ++t) {
    for (std::size_t r = 0; r < kept_dim; ++r) {
      const auto row = static_cast<Eigen::Index>(kept_offsets[r] | traced_offsets[t]);
      for (std::size_t c = 0; c < kept_dim; ++c) {
        const auto col = static_cast<Eigen::Index>(kept_offsets[c] | traced_offsets[t]);
        out(r, c) += a(row, col);
      }
    }
  }
  return out;
}

StateVector apply_to_each_qubit(const DenseOperator& u, const StateVector& v) {
  const int n = qubit_count(v.size());
  StateVector out = v;
  for (int k = 1; k <= n; ++k) {
    const Eigen::Index stride = Eigen::Index{1} << bit_of(k, n);
    for (Eigen::Index base = 0; base < out.size(); ++base) {
      if (base & stride) continue;
      const complex_t a0 = out(base);
      const complex_t a1 = out(base | stride);
      out(base) = u(0, 0) * a0 + u(0, 1) * a1;
      out(base | stride) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
  return out;
}

DenseOperator permute_qubits(const DenseOperator& a, const std::vector<int>& perm) {
  const int n = qubit_count(a.rows());
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("permute_qubits: permutation size mismatch");
  }
  std::vector<int> check = perm;
  std::sort(check.begin(), check.end());
  for (int k = 0; k < n; ++k) {
    if (check[k] != k + 1) {
      throw std::invalid_argument("permute_qubits: not a permutation of 1..n");
    }
  }
  std::vector<Eigen::Index> image(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index idx = 0; idx < a.rows(); ++idx) {
    Eigen::Index mapped = 0;
    for (int k = 1; k <= n; ++k) {
      if ((idx >> bit_of(k, n)) & 1) mapped |= Eigen::Index{1} << bit_of(perm[k - 1], n);
    }
    image[idx] = mapped;
  }
  DenseOperator out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out(image[r], image[c]) = a(r, c);
  }
  return out;
}

double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double hermiticity_residual(const DenseOperator& a) {
  return max_abs_diff(a, a.adjoint());
}

double expectation(const DenseOperator& a, const StateVector& psi) {
  return psi.dot(a * psi).real();
}

StateVector singlet() {
  StateVector s = StateVector::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  return s;
}

}  // namespace qpurify
