#include "qpurify/cloning.hpp"

#include <cmath>
#include <string>

#include "qpurify/analytics.hpp"
#include "qpurify/quadrature.hpp"
#include "qpurify/summation.hpp"

namespace qpurify {

void CloneSettings::validate() const {
  if (n_in <= 0 || n_in % 2 != 0) throw std::invalid_argument("N must be even");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (m_out && *m_out < n_in) {
    throw std::invalid_argument("M must be >= N (got M=" + std::to_string(*m_out) +
                                ", N=" + std::to_string(n_in) + ")");
  }
}

double pure_cloning_fidelity(int j, std::optional<std::int64_t> m_out) {
  if (j < 0) throw std::invalid_argument("pure_cloning_fidelity: j must be >= 0");
  if (!m_out) return (2.0 * j + 1.0) / (2.0 * j + 2.0);
  if (*m_out < 2 * j || *m_out < 1) {
    throw std::invalid_argument("pure_cloning_fidelity: M must be >= 2j and >= 1");
  }
  const auto m = static_cast<double>(*m_out);
  return (m * (2.0 * j + 1.0) + 2.0 * j) / (m * (2.0 * j + 2.0));
}

double mixed_cloning_fidelity(const CloneSettings& s) {
  s.validate();
  CompensatedSum sum;
  sum += 0.5 * block_probability(s.n_in, s.lambda, 0);
  for (int j = 1; j <= s.n_in / 2; ++j) {
    const double p = block_probability(s.n_in, s.lambda, j);
    const double f = block_fidelity(s.lambda, j);
    const double clone = pure_cloning_fidelity(j, s.m_out);
    sum += p * (clone * f + (1.0 - clone) * (1.0 - f));
  }
  return sum.value();
}

double mixed_cloning_lambda(const CloneSettings& s) { return 2.0 * mixed_cloning_fidelity(s) - 1.0; }

double estimation_lambda(int n, double lambda) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("N must be even");
  CompensatedSum sum;
  for (int j = 1; j <= n / 2; ++j) {
    sum += block_probability(n, lambda, j) * (2.0 * block_fidelity(lambda, j) - 1.0) * j /
           (j + 1.0);
  }
  return sum.value();
}

double scaling_relation_check(const CloneSettings& s) {
  s.validate();
  if (!s.m_out) throw std::invalid_argument("scaling_relation_check needs a finite M");
  const auto m = static_cast<double>(*s.m_out);
  return std::abs(mixed_cloning_lambda(s) - estimation_lambda(s.n_in, s.lambda) * (m + 2.0) / m);
}

double covariant_map_fidelity(const MixedQubit& q, int j, const CovariantMapParams& params) {
  if (j < 1) throw std::invalid_argument("covariant_map_fidelity: need j >= 1");
  if (params.x < 0.0 || params.y < 0.0 || params.x + params.y > 1.0 + 1e-15 ||
      params.x + params.y <= 0.0) {
    throw std::invalid_argument("covariant_map_fidelity: need x, y >= 0 and 0 < x + y <= 1");
  }
  const auto [one_n, zero_n] = qubit_eigenstates(q);
  const double c1 = q.c1();
  const double c0 = q.c0();
  const QuadratureRule theta_rule = gauss_legendre(2 * j + 1);
  const QuadratureRule phi_rule = uniform_circle(4 * j + 1);

  // Sum of n(theta)^{2j} [x |Psi><Psi| + y |Psi_perp><Psi_perp|] with
  // n^{2j} |Psi><Psi| = n^{2j-1} |Psi~><Psi~| for the unnormalized Psi~.
  DenseOperator output = DenseOperator::Zero(2, 2);
  for (std::size_t a = 0; a < theta_rule.nodes.size(); ++a) {
    const double cos_theta = theta_rule.nodes[a];
    const double cos_half = std::sqrt(0.5 * (1.0 + cos_theta));
    const double sin_half = std::sqrt(0.5 * (1.0 - cos_theta));
    const double weight_n = c1 * cos_half * cos_half + c0 * sin_half * sin_half;
    for (std::size_t b = 0; b < phi_rule.nodes.size(); ++b) {
      const complex_t on_one = std::sqrt(c1) * cos_half;
      const complex_t on_zero = std::sqrt(c0) * sin_half * std::polar(1.0, phi_rule.nodes[b]);
      const StateVector psi = on_one * one_n + on_zero * zero_n;
      const StateVector perp = -std::conj(on_zero) * one_n + std::conj(on_one) * zero_n;
      const double w = 0.5 * theta_rule.weights[a] * phi_rule.weights[b] *
                       std::pow(weight_n, 2 * j - 1);
      output.noalias() += w * (params.x * (psi * psi.adjoint()) + params.y * (perp * perp.adjoint()));
    }
  }
  output *= (2.0 * j + 1.0) * block_normalizer(q.lambda(), j);
  return expectation(output, one_n) / output.trace().real();
}

ScanResult optimality_scan(const MixedQubit& q, int j, int grid) {
  if (grid < 11) throw std::invalid_argument("optimality_scan: grid must be >= 11");
  if (j < 1) throw std::invalid_argument("optimality_scan: need j >= 1");
  ScanResult best;
  best.best_fidelity = -1.0;
  const double step = 1.0 / (grid - 1);
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; a + b < grid; ++b) {
      if (a == 0 && b == 0) continue;
      const CovariantMapParams params{a * step, b * step};
      const double f = covariant_map_fidelity(q, j, params);
      ++best.points;
      if (f > best.best_fidelity) {
        best.best_fidelity = f;
        best.best_x = params.x;
        best.best_y = params.y;
      }
    }
  }
  return best;
}

}  // namespace qpurify
