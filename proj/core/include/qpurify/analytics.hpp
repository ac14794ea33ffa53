#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qpurify/core.hpp"

namespace qpurify {

using BigInt = boost::multiprecision::cpp_int;

/// Below this lambda the closed forms switch to their lambda -> 0 limits.
inline constexpr double kSmallLambda = 1e-8;
/// Within this distance of lambda = 1 the block fidelity is taken as 1.
inline constexpr double kPureLambdaGap = 1e-12;

/// d_j = C(2J, J-j) - C(2J, J-j-1), d_J = 1, for n = 2J qubits.
BigInt multiplicity(int n, int j);
/// d_0..d_J in one pass.
std::vector<BigInt> multiplicities(int n);

/// Probability p_j of projecting rho^{\otimes n} onto the spin-j blocks.
double block_probability(int n, double lambda, int j);

/// Single-qubit fidelity f_j of the 2j qubits kept after outcome j.
///
/// For j = 0 no qubit is kept and the closed form is 0/0; the value returned
/// is the j -> 0 continuation c1/lambda + c1 c0 ln(c0/c1) / lambda^2.
double block_fidelity(double lambda, int j);

/// The j -> 0 continuation used for the j = 0 row.
double zero_block_fidelity(double lambda);

/// lambda / (c1^{2j+1} - c0^{2j+1}), with its lambda -> 0 limit 2^{2j}/(2j+1).
double block_normalizer(double lambda, int j);

/// rho_j on 2j qubits: diagonal in the rotated Dicke basis |j,m>_n with
/// weights proportional to c0^{j-m} c1^{j+m}.
DenseOperator block_state_matrix(const MixedQubit& q, int j,
                                 int qubit_cap = kDefaultQubitCap);

struct SpectrumRow {
  int j = 0;
  BigInt multiplicity;
  double probability = 0.0;
  double fidelity = 0.0;
};

struct BlockSpectrum {
  int n = 0;
  double lambda = 0.0;
  std::vector<SpectrumRow> rows;  // j = 0 .. n/2
};

BlockSpectrum block_spectrum(int n, double lambda);

/// D_N = sum_j p_j (2j / N).
double yield(int n, double lambda);

/// sum_j p_j f_j; the j = 0 term uses zero_block_fidelity when included.
double mean_fidelity(int n, double lambda, bool include_j0 = true);

/// lambda + (1 - lambda) / (N lambda).
double yield_asymptote(int n, double lambda);
/// 1 - (1 - lambda) / (2 N lambda^2).
double mean_fidelity_asymptote(int n, double lambda);

}  // namespace qpurify
