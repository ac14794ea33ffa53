#include "qpurify/analytics.hpp"

#include <cmath>
#include <string>

#include "qpurify/blocks.hpp"
#include "qpurify/summation.hpp"

namespace qpurify {

namespace {

// Direct evaluation is exact enough while d_j stays well inside 2^53.
constexpr int kDirectEvaluationMaxQubits = 50;

void check_register(int n) {
  if (n <= 0 || n % 2 != 0) {
    throw std::invalid_argument("N must be even and positive, got " + std::to_string(n));
  }
}

void check_spin(int n, int j) {
  if (j < 0 || 2 * j > n) {
    throw std::invalid_argument("spin j=" + std::to_string(j) + " out of range for N=" +
                                std::to_string(n));
  }
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// log(1 - r^k) with r = c0/c1 = (1 - lambda)/(1 + lambda), lambda > 0.
double log_one_minus_ratio_power(double lambda, int k) {
  const double log_ratio = std::log1p(-lambda) - std::log1p(lambda);
  return std::log(-std::expm1(k * log_ratio));
}

double log_multiplicity(int n, int j) {
  const int spin_max = n / 2;
  return std::lgamma(n + 1.0) - std::lgamma(spin_max - j + 1.0) -
         std::lgamma(spin_max + j + 1.0) + std::log(2.0 * j + 1.0) -
         std::log(spin_max + j + 1.0);
}

}  // namespace

BigInt multiplicity(int n, int j) {
  check_register(n);
  check_spin(n, j);
  const int spin_max = n / 2;
  if (j == spin_max) return 1;
  return binomial(n, spin_max - j) - binomial(n, spin_max - j - 1);
}

std::vector<BigInt> multiplicities(int n) {
  check_register(n);
  const int spin_max = n / 2;
  // Row C(n, 0..J) by the multiplicative recurrence.
  std::vector<BigInt> row(spin_max + 1);
  row[0] = 1;
  for (int k = 0; k < spin_max; ++k) row[k + 1] = row[k] * (n - k) / (k + 1);
  std::vector<BigInt> d(spin_max + 1);
  d[spin_max] = 1;
  for (int j = 0; j < spin_max; ++j) d[j] = row[spin_max - j] - row[spin_max - j - 1];
  return d;
}

double block_probability(int n, double lambda, int j) {
  check_register(n);
  check_spin(n, j);
  check_lambda(lambda);
  const int spin_max = n / 2;
  const int k = 2 * j + 1;

  if (lambda < kSmallLambda) {
    if (n <= kDirectEvaluationMaxQubits) {
      return multiplicity(n, j).convert_to<double>() * k * std::ldexp(1.0, -n);
    }
    return std::exp(log_multiplicity(n, j) + std::log(k) - n * std::log(2.0));
  }

  const double c1 = 0.5 * (1.0 + lambda);
  const double c0 = 0.5 * (1.0 - lambda);
  if (c0 == 0.0) return j == spin_max ? 1.0 : 0.0;

  if (n <= kDirectEvaluationMaxQubits) {
    const double d = multiplicity(n, j).convert_to<double>();
    return d * std::pow(c0 * c1, spin_max - j) * std::pow(c1, k) *
           std::exp(log_one_minus_ratio_power(lambda, k)) / lambda;
  }
  const double log_p = log_multiplicity(n, j) + (spin_max - j) * std::log(c0 * c1) +
                       k * std::log(c1) + log_one_minus_ratio_power(lambda, k) -
                       std::log(lambda);
  return std::exp(log_p);
}

double zero_block_fidelity(double lambda) {
  check_lambda(lambda);
  if (lambda < kSmallLambda) return 0.5;
  if (lambda >= 1.0) return 1.0;
  if (lambda < 0.5) {
    // 1/2 + sum_k lambda^(2k-1) / (4k^2 - 1), free of the 1/lambda cancellation.
    double sum = 0.5;
    double power = lambda;
    for (int k = 1; k < 200; ++k) {
      const double term = power / (4.0 * k * k - 1.0);
      sum += term;
      if (term < 1e-18 * sum) break;
      power *= lambda * lambda;
    }
    return sum;
  }
  const double c1 = 0.5 * (1.0 + lambda);
  const double c0 = 0.5 * (1.0 - lambda);
  return c1 / lambda + c1 * c0 * std::log(c0 / c1) / (lambda * lambda);
}

double block_fidelity(double lambda, int j) {
  check_lambda(lambda);
  if (j < 0) throw std::invalid_argument("block_fidelity: j must be >= 0");
  if (j == 0) return zero_block_fidelity(lambda);
  if (lambda < kSmallLambda) return 0.5;
  if (1.0 - lambda < kPureLambdaGap) return 1.0;
  const int k = 2 * j + 1;
  const double c1 = 0.5 * (1.0 + lambda);
  const double one_minus = std::exp(log_one_minus_ratio_power(lambda, k));
  return (k / one_minus - c1 / lambda) / (2.0 * j);
}

double block_normalizer(double lambda, int j) {
  check_lambda(lambda);
  if (j < 0) throw std::invalid_argument("block_normalizer: j must be >= 0");
  const int k = 2 * j + 1;
  if (lambda < kSmallLambda) return std::ldexp(1.0, 2 * j) / k;
  const double c1 = 0.5 * (1.0 + lambda);
  return lambda / (std::pow(c1, k) * std::exp(log_one_minus_ratio_power(lambda, k)));
}

DenseOperator block_state_matrix(const MixedQubit& q, int j, int qubit_cap) {
  if (j < 0) throw std::invalid_argument("block_state_matrix: j must be >= 0");
  if (2 * j > qubit_cap) {
    throw SizeLimitError("block state of " + std::to_string(2 * j) +
                         " qubits exceeds the cap of " + std::to_string(qubit_cap));
  }
  if (j == 0) return DenseOperator::Identity(1, 1);

  std::vector<double> weights(2 * j + 1);
  double total = 0.0;
  for (int m = -j; m <= j; ++m) {
    weights[m + j] = std::pow(q.c0(), j - m) * std::pow(q.c1(), j + m);
    total += weights[m + j];
  }
  const DenseOperator u = rotation_to(q.direction());
  const Eigen::Index dim = Eigen::Index{1} << (2 * j);
  DenseOperator rho = DenseOperator::Zero(dim, dim);
  for (int m = -j; m <= j; ++m) {
    const double w = weights[m + j] / total;
    if (w == 0.0) continue;
    const StateVector v = apply_to_each_qubit(u, dicke_state(j, m));
    rho.noalias() += w * (v * v.adjoint());
  }
  return rho;
}

BlockSpectrum block_spectrum(int n, double lambda) {
  check_register(n);
  check_lambda(lambda);
  BlockSpectrum s;
  s.n = n;
  s.lambda = lambda;
  std::vector<BigInt> d = multiplicities(n);
  for (int j = 0; j <= n / 2; ++j) {
    s.rows.push_back({j, std::move(d[j]), block_probability(n, lambda, j),
                      block_fidelity(lambda, j)});
  }
  return s;
}

double yield(int n, double lambda) {
  check_register(n);
  check_lambda(lambda);
  CompensatedSum sum;
  for (int j = 1; j <= n / 2; ++j) {
    sum += block_probability(n, lambda, j) * (2.0 * j) / n;
  }
  return sum.value();
}

double mean_fidelity(int n, double lambda, bool include_j0) {
  check_register(n);
  check_lambda(lambda);
  CompensatedSum sum;
  for (int j = include_j0 ? 0 : 1; j <= n / 2; ++j) {
    sum += block_probability(n, lambda, j) * block_fidelity(lambda, j);
  }
  return sum.value();
}

double yield_asymptote(int n, double lambda) {
  return lambda + (1.0 - lambda) / (n * lambda);
}

double mean_fidelity_asymptote(int n, double lambda) {
  return 1.0 - (1.0 - lambda) / (2.0 * n * lambda * lambda);
}

}  // namespace qpurify
