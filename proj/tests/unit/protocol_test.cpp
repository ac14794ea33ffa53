#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "qpurify/protocol.hpp"
#include "qpurify/statistics.hpp"

namespace qpurify {
namespace {

std::vector<double> spectrum_probabilities(int n, double lambda) {
  std::vector<double> p;
  for (int j = 0; j <= n / 2; ++j) p.push_back(block_probability(n, lambda, j));
  return p;
}

TEST(RunProtocol, DeterministicAcrossWorkerCounts) {
  const MixedQubit q(0.5, {1.0, 1.0, 0.0});
  ProtocolOptions one;
  one.workers = 1;
  ProtocolOptions three;
  three.workers = 3;
  const auto a = run_protocol(q, 10, 20000, 99, one);
  const auto b = run_protocol(q, 10, 20000, 99, three);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.histogram, run_protocol(q, 10, 20000, 100, one).histogram);
}

TEST(RunProtocol, HistogramMatchesSpectrum) {
  const int n = 10;
  const auto s = run_protocol(MixedQubit(0.5), n, 200000, 1);
  EXPECT_EQ(std::accumulate(s.histogram.begin(), s.histogram.end(), std::uint64_t{0}), 200000U);
  EXPECT_GT(chi_square_goodness_of_fit(s.histogram, spectrum_probabilities(n, 0.5)).p_value, 1e-4);
}

TEST(RunProtocol, EstimatesMatchClosedForms) {
  for (double lambda : {0.2, 0.6, 0.95}) {
    const auto s = run_protocol(MixedQubit(lambda), 20, 100000, 5);
    EXPECT_LT(std::abs(s.yield.mean - yield(20, lambda)), 4 * s.yield.std_error + 1e-12);
    EXPECT_LT(std::abs(s.mean_fidelity.mean - mean_fidelity(20, lambda)),
              4 * s.mean_fidelity.std_error + 1e-12);
  }
}

TEST(RunProtocol, PureInputKeepsEverything) {
  const auto s = run_protocol(MixedQubit(1.0), 8, 1000, 3);
  EXPECT_EQ(s.histogram.back(), 1000U);
  EXPECT_DOUBLE_EQ(s.yield.mean, 1.0);
  EXPECT_DOUBLE_EQ(s.mean_fidelity.mean, 1.0);
  EXPECT_DOUBLE_EQ(s.yield.std_error, 0.0);
}

TEST(RunProtocol, AlphaUniformWithinBlock) {
  const int n = 6;
  const auto s = run_protocol(MixedQubit(0.3), n, 60000, 7);
  ASSERT_FALSE(s.label_counts.empty());
  for (int j = 0; j <= n / 2; ++j) {
    const int d = multiplicity(n, j).convert_to<int>();
    std::vector<std::uint64_t> counts;
    for (int alpha = 1; alpha <= d; ++alpha) {
      const auto it = s.label_counts.find({j, alpha});
      counts.push_back(it == s.label_counts.end() ? 0 : it->second);
    }
    EXPECT_GT(chi_square_goodness_of_fit(counts, std::vector<double>(d, 1.0 / d)).p_value, 1e-4);
  }
}

TEST(RunProtocol, TraceIsOrderedAndConsistent) {
  std::vector<OutcomeRecord> trace;
  ProtocolOptions options;
  options.trace = &trace;
  options.workers = 2;
  const auto s = run_protocol(MixedQubit(0.4), 400, 9000, 11, options);
  ASSERT_EQ(trace.size(), 9000U);
  EXPECT_TRUE(s.label_counts.empty());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    EXPECT_EQ(r.trial, i);
    EXPECT_EQ(r.kept_qubits, 2 * r.j);
    EXPECT_GE(r.alpha, 1);
    EXPECT_LE(r.alpha, multiplicity(400, r.j));
    EXPECT_DOUBLE_EQ(r.fidelity, block_fidelity(0.4, r.j));
  }
}

TEST(RunProtocol, RejectsBadArguments) {
  EXPECT_THROW(run_protocol(MixedQubit(0.4), 5, 10, 1), std::invalid_argument);
  EXPECT_THROW(run_protocol(MixedQubit(0.4), 4, 0, 1), std::invalid_argument);
}

TEST(RunProtocolDense, AgreesWithSampler) {
  const int n = 6;
  const MixedQubit q(0.55, {0.3, 0.4, -0.5});
  const SchurBasis basis = build_schur_basis(n);
  const auto dense = run_protocol_dense(q, basis, 60000, 21);
  const auto fast = run_protocol(q, n, 60000, 22);
  EXPECT_GT(chi_square_two_sample(dense.histogram, fast.histogram).p_value, 1e-4);
  EXPECT_GT(chi_square_goodness_of_fit(dense.histogram, spectrum_probabilities(n, 0.55)).p_value,
            1e-4);
  EXPECT_LT(std::abs(dense.mean_fidelity.mean - mean_fidelity(n, 0.55)),
            4 * dense.mean_fidelity.std_error);
  EXPECT_EQ(dense.label_counts.size(), 5U + 9U + 5U + 1U);
}

TEST(TrialsCsv, HeaderAndSeparator) {
  std::vector<OutcomeRecord> records(2);
  records[0] = {0, 1, 1, 2, 0.75};
  records[1] = {1, 0, 2, 0, 0.5};
  std::ostringstream csv;
  write_trials_csv(csv, records);
  EXPECT_EQ(csv.str(), "trial,j,alpha,kept,fidelity\n0,1,1,2,0.75\n1,0,2,0,0.5\n");
  std::ostringstream tsv;
  write_trials_csv(tsv, records, '\t');
  EXPECT_EQ(tsv.str().substr(0, 28), "trial\tj\talpha\tkept\tfidelity\n");
}

}  // namespace
}  // namespace qpurify
