#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "qpurify/analytics.hpp"
#include "qpurify/blocks.hpp"
#include "qpurify/core.hpp"

namespace qpurify {

/// One simulated run of the purification protocol.
struct OutcomeRecord {
  std::uint64_t trial = 0;
  int j = 0;
  BigInt alpha = 1;
  int kept_qubits = 0;  // 2j
  double fidelity = 0.0;

  friend bool operator==(const OutcomeRecord&, const OutcomeRecord&) = default;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct SimulationSummary {
  int n = 0;
  double lambda = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// Per-trial kept fraction 2j/N.
  Estimate yield;
  /// Per-trial kept-qubit fidelity (j = 0 trials count with the j -> 0
  /// continuation value, matching mean_fidelity's default).
  Estimate mean_fidelity;
  /// Counts indexed by j = 0..N/2; sums to trials.
  std::vector<std::uint64_t> histogram;
  /// Counts per (j, alpha); filled only while the label count stays small
  /// (at most 4096 labels).
  std::map<BlockLabel, std::uint64_t> label_counts;

  friend bool operator==(const SimulationSummary&, const SimulationSummary&) = default;
};

struct ProtocolOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// When set, receives every trial in trial order.
  std::vector<OutcomeRecord>* trace = nullptr;
};

/// Trials are grouped into chunks of this size; chunk c draws from its own
/// std::mt19937_64 seeded with {seed, c}, so results do not depend on the
/// worker count.
inline constexpr std::uint64_t kTrialsPerChunk = 4096;

/// Samples j from p_j and alpha uniformly from 1..d_j per trial, without
/// building any state.
SimulationSummary run_protocol(const MixedQubit& q, int n, std::uint64_t trials,
                               std::uint64_t seed, const ProtocolOptions& options = {});

/// The same protocol on explicit matrices: block probabilities from
/// projector traces on rho^{\otimes n}, then block swap, discarding the
/// singlet qubits, and kept-qubit fidelities from partial traces.
SimulationSummary run_protocol_dense(const MixedQubit& q, const SchurBasis& basis,
                                     std::uint64_t trials, std::uint64_t seed,
                                     const ProtocolOptions& options = {});

/// `trial,j,alpha,kept,fidelity` with a header row.
void write_trials_csv(std::ostream& out, const std::vector<OutcomeRecord>& records,
                      char separator = ',');

}  // namespace qpurify
