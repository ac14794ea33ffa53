#include "qpurify/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qpurify/analytics.hpp"
#include "qpurify/quadrature.hpp"

namespace qpurify {

namespace {

constexpr double kNegligibleProbability = 1e-14;

DenseOperator singlet_projector_power(int pairs) {
  if (pairs == 0) return DenseOperator::Identity(1, 1);
  const StateVector s = singlet();
  return kron_power(DenseOperator(s * s.adjoint()), pairs, std::numeric_limits<int>::max());
}

// Multiplies every qubit by the same 2x2 operator on both sides: U^{(x)n} A U^{dag (x)n}.
DenseOperator conjugate_each_qubit(const DenseOperator& u, const DenseOperator& a) {
  if (a.rows() == 1) return a;
  DenseOperator left(a.rows(), a.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c) left.col(c) = apply_to_each_qubit(u, a.col(c));
  DenseOperator right(a.rows(), a.cols());
  const DenseOperator left_adj = left.adjoint();
  for (Eigen::Index c = 0; c < a.cols(); ++c) right.col(c) = apply_to_each_qubit(u, left_adj.col(c));
  return right.adjoint();
}

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  const auto count = static_cast<double>(xs.size());
  if (xs.empty()) return m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std_error = std::sqrt(ss / (count - 1.0) / count);
  }
  return m;
}

// Branch probability and mean single-qubit fidelity, grouped by output size.
struct BranchFigures {
  std::map<int, double> probability;
  std::map<int, double> fidelity;  // only for M >= 1 and nonzero probability
};

BranchFigures figures_of_merit(const std::vector<ProcedureOutcome>& outcomes,
                               const StateVector& target) {
  std::map<int, DenseOperator> by_size;
  for (const auto& o : outcomes) {
    auto it = by_size.find(o.qubits);
    if (it == by_size.end()) {
      by_size.emplace(o.qubits, o.output);
    } else {
      it->second += o.output;
    }
  }
  BranchFigures f;
  for (const auto& [size, op] : by_size) {
    const double p = op.trace().real();
    f.probability[size] = p;
    if (size >= 1 && p > kNegligibleProbability) {
      const auto per_qubit = single_qubit_fidelities(op / p, target);
      f.fidelity[size] =
          std::accumulate(per_qubit.begin(), per_qubit.end(), 0.0) / per_qubit.size();
    }
  }
  return f;
}

}  // namespace

DenseOperator haar_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseOperator z(2, 2);
  for (Eigen::Index r = 0; r < 2; ++r) {
    for (Eigen::Index c = 0; c < 2; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = complex_t(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<DenseOperator> qr(z);
  DenseOperator q = qr.householderQ() * DenseOperator::Identity(2, 2);
  const DenseOperator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < 2; ++k) {
    const complex_t d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

Direction random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    Direction d{normal(rng), normal(rng), normal(rng)};
    const double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (norm > 1e-6) {
      for (auto& c : d) c /= norm;
      return d;
    }
  }
}

BlockMeasurement measure_block(const DenseOperator& state, const SchurBasis& basis,
                               BlockLabel label) {
  if (state.rows() != basis.dimension() || state.cols() != basis.dimension()) {
    throw std::invalid_argument("measure_block: state dimension does not match the basis");
  }
  const auto& v = basis.block(label.j, label.alpha);
  const DenseOperator compressed = v.adjoint() * state * v;
  BlockMeasurement m;
  m.probability = compressed.trace().real();
  if (m.probability >= kNegligibleProbability) {
    m.post_state = v * (compressed / m.probability) * v.adjoint();
  }
  return m;
}

DenseOperator purify_block(const DenseOperator& state, const SchurBasis& basis,
                           BlockLabel label) {
  const auto& v = basis.block(label.j, label.alpha);
  // U^dag P rho P U with P = V V^dag; U is Hermitian, so only U V is needed.
  const Eigen::MatrixXcd moved = apply_block_swap(basis, label, v);
  const DenseOperator compressed = v.adjoint() * state * v;
  // Trace out the trailing qubits directly on the factor: row index is
  // kept * traced_dim + traced since qubit 1 is the most significant bit.
  const Eigen::Index kept_dim = Eigen::Index{1} << (2 * label.j);
  const Eigen::Index traced_dim = moved.rows() / kept_dim;
  using Strided = Eigen::Map<const Eigen::MatrixXcd, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
  DenseOperator out = DenseOperator::Zero(kept_dim, kept_dim);
  for (Eigen::Index t = 0; t < traced_dim; ++t) {
    const Strided rows(moved.data() + t, kept_dim, moved.cols(),
                       Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(moved.rows(), traced_dim));
    const Eigen::MatrixXcd block = rows;
    out.noalias() += block * compressed * block.adjoint();
  }
  return out;
}

std::vector<double> single_qubit_fidelities(const DenseOperator& state,
                                            const StateVector& target) {
  const int n = qubit_count(state.rows());
  std::vector<double> out;
  out.reserve(n);
  for (int k = 1; k <= n; ++k) out.push_back(expectation(partial_trace(state, {k}), target));
  return out;
}

double DecompositionReport::max_residual() const {
  double worst = std::max(reconstruction_residual, excitation_residual);
  for (const auto* m : {&probability_residuals, &post_measurement_residuals, &fidelity_residuals}) {
    for (const auto& [label, r] : *m) worst = std::max(worst, r);
  }
  return worst;
}

DecompositionReport verify_decomposition(const MixedQubit& q, const SchurBasis& basis,
                                         double tol) {
  const int n = basis.qubits();
  const int spin_max = n / 2;
  DecompositionReport report;
  report.n = n;
  report.lambda = q.lambda();
  report.direction = q.direction();
  report.tolerance = tol;

  const DenseOperator rho = density_matrix(q);
  const DenseOperator product = kron_power(rho, n, n);
  const StateVector target = qubit_eigenstates(q).first;

  // (a) block sum, with per-label measurement statistics checked on the way.
  DenseOperator block_sum = DenseOperator::Zero(product.rows(), product.cols());
  for (int j = 0; j <= spin_max; ++j) {
    const double p = block_probability(n, q.lambda(), j);
    const int d = basis.multiplicity(j);
    const DenseOperator rho_j1 =
        kron(block_state_matrix(q, j, n), singlet_projector_power(spin_max - j));
    const auto& first = basis.block(j, 1);
    const DenseOperator compressed = first.adjoint() * rho_j1 * first;
    const double f = block_fidelity(q.lambda(), j);
    for (int alpha = 1; alpha <= d; ++alpha) {
      const BlockLabel label{j, alpha};
      const Eigen::MatrixXcd moved = apply_block_swap(basis, label, first);
      const DenseOperator rho_ja = moved * compressed * moved.adjoint();
      block_sum += (p / d) * rho_ja;

      const BlockMeasurement m = measure_block(product, basis, label);
      report.block_probabilities[label] = m.probability;
      report.probability_residuals[label] = std::abs(m.probability - p / d);
      if (!m.post_state) continue;
      report.post_measurement_residuals[label] = max_abs_diff(*m.post_state, rho_ja);
      if (j >= 1) {
        const DenseOperator kept = purify_block(product, basis, label) / m.probability;
        double worst = 0.0;
        for (double fk : single_qubit_fidelities(kept, target)) worst = std::max(worst, std::abs(fk - f));
        report.fidelity_residuals[label] = worst;
      }
    }
  }
  report.reconstruction_residual = max_abs_diff(block_sum, product);

  // (b) excitation-number projectors: diagonal in the rotated product basis.
  {
    DenseOperator weights = DenseOperator::Zero(product.rows(), product.cols());
    for (Eigen::Index idx = 0; idx < weights.rows(); ++idx) {
      const int zeros = n - __builtin_popcountll(static_cast<unsigned long long>(idx));
      weights(idx, idx) = std::pow(q.c0(), zeros) * std::pow(q.c1(), n - zeros);
    }
    const DenseOperator excitation_sum = conjugate_each_qubit(rotation_to(q.direction()), weights);
    report.excitation_residual = max_abs_diff(excitation_sum, product);
  }

  report.passed = report.reconstruction_residual < tol && report.excitation_residual < tol;
  for (const auto& label : basis.labels()) {
    for (const auto* m : {&report.probability_residuals, &report.post_measurement_residuals,
                          &report.fidelity_residuals}) {
      const auto it = m->find(label);
      if (it != m->end() && !(it->second < tol)) {
        report.passed = false;
        if (!report.offending) report.offending = label;
      }
    }
  }
  return report;
}

double quadrature_check(const MixedQubit& q, int j, int theta_nodes, int phi_nodes,
                        int qubit_cap) {
  if (j < 1) throw std::invalid_argument("quadrature_check: need j >= 1");
  if (phi_nodes == 0) phi_nodes = 4 * j + 1;
  if (theta_nodes < 2 * j + 1 || phi_nodes < 4 * j + 1) {
    throw std::invalid_argument("quadrature_check: spin " + std::to_string(j) + " needs at least " +
                                std::to_string(2 * j + 1) + " theta and " +
                                std::to_string(4 * j + 1) + " phi nodes");
  }
  const DenseOperator reference = block_state_matrix(q, j, qubit_cap);
  const auto [one_n, zero_n] = qubit_eigenstates(q);
  const double c1 = q.c1();
  const double c0 = q.c0();
  const QuadratureRule theta_rule = gauss_legendre(theta_nodes);
  const QuadratureRule phi_rule = uniform_circle(phi_nodes);

  // n(theta)^{2j} |Psi><Psi|^{(x)2j} = |Psi~><Psi~|^{(x)2j}, with the
  // unnormalized Psi~ = sqrt(c1) cos(t/2)|1_n> + sqrt(c0) sin(t/2) e^{i phi}|0_n>.
  DenseOperator integral = DenseOperator::Zero(reference.rows(), reference.cols());
  for (std::size_t a = 0; a < theta_rule.nodes.size(); ++a) {
    const double x = theta_rule.nodes[a];  // cos(theta)
    const double cos_half = std::sqrt(0.5 * (1.0 + x));
    const double sin_half = std::sqrt(0.5 * (1.0 - x));
    for (std::size_t b = 0; b < phi_rule.nodes.size(); ++b) {
      const complex_t phase = std::polar(1.0, phi_rule.nodes[b]);
      const StateVector psi =
          std::sqrt(c1) * cos_half * one_n + std::sqrt(c0) * sin_half * phase * zero_n;
      const StateVector tensor = kron_power(psi, 2 * j, qubit_cap);
      // dOmega/4pi = d(cos theta)/2 * dphi/2pi
      const double w = 0.5 * theta_rule.weights[a] * phi_rule.weights[b];
      integral.noalias() += w * (tensor * tensor.adjoint());
    }
  }
  integral *= (2.0 * j + 1.0) * block_normalizer(q.lambda(), j);
  return max_abs_diff(integral, reference);
}

namespace {

double reversibility_residual(const DenseOperator& product, const SchurBasis& basis,
                              BlockLabel label) {
  const BlockMeasurement m = measure_block(product, basis, label);
  if (!m.post_state) return 0.0;
  const DenseOperator purified = purify_block(product, basis, label) / m.probability;
  const DenseOperator padded = kron(purified, singlet_projector_power(basis.qubits() / 2 - label.j));
  return max_abs_diff(conjugate_by_block_swap(basis, label, padded), *m.post_state);
}

}  // namespace

double reversibility_check(const MixedQubit& q, const SchurBasis& basis, BlockLabel label) {
  const int n = basis.qubits();
  return reversibility_residual(kron_power(density_matrix(q), n, n), basis, label);
}

std::map<BlockLabel, double> reversibility_check_all(const MixedQubit& q, const SchurBasis& basis) {
  const int n = basis.qubits();
  const DenseOperator product = kron_power(density_matrix(q), n, n);
  std::map<BlockLabel, double> out;
  for (const auto& label : basis.labels()) out[label] = reversibility_residual(product, basis, label);
  return out;
}

Procedure purification_procedure(const SchurBasis& basis) {
  return [&basis](const DenseOperator& state) {
    std::vector<ProcedureOutcome> out;
    for (const auto& label : basis.labels()) {
      out.push_back({2 * label.j, purify_block(state, basis, label)});
    }
    return out;
  };
}

Procedure keep_first_qubit_procedure() {
  return [](const DenseOperator& state) {
    return std::vector<ProcedureOutcome>{{1, partial_trace(state, {1})}};
  };
}

double covariance_residual(const Procedure& procedure, const MixedQubit& q, int n,
                           const DenseOperator& u, int qubit_cap) {
  const DenseOperator rho = density_matrix(q);
  const DenseOperator rotated = u * rho * u.adjoint();
  const auto direct = procedure(kron_power(rotated, n, qubit_cap));
  const auto plain = procedure(kron_power(rho, n, qubit_cap));
  if (direct.size() != plain.size()) {
    throw std::logic_error("covariance_residual: procedure changed its branch layout");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < plain.size(); ++i) {
    const DenseOperator moved = conjugate_each_qubit(u, plain[i].output);
    worst = std::max(worst, max_abs_diff(direct[i].output, moved));
  }
  return worst;
}

SymmetrizationReport symmetrize_and_compare(const Procedure& procedure, const MixedQubit& q,
                                            int n, int samples, std::uint64_t seed,
                                            int qubit_cap) {
  if (samples < 2) throw std::invalid_argument("symmetrize_and_compare: need >= 2 samples");
  const StateVector target = qubit_eigenstates(q).first;
  const DenseOperator rho = density_matrix(q);

  // Symmetrized procedure, Monte Carlo over Haar unitaries and permutations.
  std::mt19937_64 rng(seed);
  std::map<int, std::vector<double>> probabilities;
  std::map<int, std::vector<double>> weighted_fidelities;
  for (int s = 0; s < samples; ++s) {
    const DenseOperator u = haar_unitary(rng);
    const DenseOperator input = kron_power(DenseOperator(u * rho * u.adjoint()), n, qubit_cap);
    auto outcomes = procedure(input);
    const DenseOperator u_dag = u.adjoint();
    for (auto& o : outcomes) {
      o.output = conjugate_each_qubit(u_dag, o.output);
      if (o.qubits >= 2) {
        std::vector<int> perm(o.qubits);
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        o.output = permute_qubits(o.output, perm);
      }
    }
    const BranchFigures f = figures_of_merit(outcomes, target);
    for (const auto& [size, p] : f.probability) {
      probabilities[size].push_back(p);
      const auto it = f.fidelity.find(size);
      weighted_fidelities[size].push_back(it == f.fidelity.end() ? 0.0 : p * it->second);
    }
  }

  // Raw procedure averaged over input directions by product quadrature.
  const QuadratureRule theta_rule = gauss_legendre(n + 2);
  const QuadratureRule phi_rule = uniform_circle(2 * n + 3);
  std::map<int, double> raw_probability;
  std::map<int, double> raw_weighted_fidelity;
  for (std::size_t a = 0; a < theta_rule.nodes.size(); ++a) {
    const double z = theta_rule.nodes[a];
    const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (std::size_t b = 0; b < phi_rule.nodes.size(); ++b) {
      const double phi = phi_rule.nodes[b];
      const MixedQubit turned(q.lambda(), {rxy * std::cos(phi), rxy * std::sin(phi), z});
      const double w = 0.5 * theta_rule.weights[a] * phi_rule.weights[b];
      const auto outcomes = procedure(kron_power(density_matrix(turned), n, qubit_cap));
      const BranchFigures f = figures_of_merit(outcomes, qubit_eigenstates(turned).first);
      for (const auto& [size, p] : f.probability) {
        raw_probability[size] += w * p;
        const auto it = f.fidelity.find(size);
        if (it != f.fidelity.end()) raw_weighted_fidelity[size] += w * p * it->second;
      }
    }
  }

  SymmetrizationReport report;
  report.consistent = true;
  for (const auto& [size, ps] : probabilities) {
    SymmetrizationRow row;
    row.qubits = size;
    const Moments pm = moments(ps);
    row.symmetrized_probability = pm.mean;
    row.probability_std_error = pm.std_error;
    row.raw_probability = raw_probability[size];
    bool ok = std::abs(pm.mean - row.raw_probability) <= 3.0 * pm.std_error + 1e-9;

    row.symmetrized_fidelity = std::numeric_limits<double>::quiet_NaN();
    row.raw_fidelity = std::numeric_limits<double>::quiet_NaN();
    if (size >= 1 && pm.mean > kNegligibleProbability) {
      const auto& a = weighted_fidelities[size];
      const double ratio = std::accumulate(a.begin(), a.end(), 0.0) /
                           std::accumulate(ps.begin(), ps.end(), 0.0);
      // Delta-method error of the ratio estimator.
      std::vector<double> linearized(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) linearized[i] = a[i] - ratio * ps[i];
      row.symmetrized_fidelity = ratio;
      row.fidelity_std_error = moments(linearized).std_error / pm.mean;
      row.raw_fidelity = raw_weighted_fidelity[size] / row.raw_probability;
      ok = ok && std::abs(ratio - row.raw_fidelity) <= 3.0 * row.fidelity_std_error + 1e-9;
    }
    row.consistent = ok;
    report.consistent = report.consistent && ok;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace qpurify
