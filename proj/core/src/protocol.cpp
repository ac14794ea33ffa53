#include "qpurify/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include <boost/random/uniform_int_distribution.hpp>

#include "qpurify/format.hpp"
#include "qpurify/oracle.hpp"
#include "qpurify/summation.hpp"

namespace qpurify {

namespace {

constexpr std::size_t kMaxTrackedLabels = 4096;

using Engine = std::mt19937_64;
using Sampler = std::function<OutcomeRecord(Engine&, std::uint64_t trial)>;

struct ChunkTally {
  CompensatedSum yield_sum, yield_squares;
  CompensatedSum fidelity_sum, fidelity_squares;
  std::vector<std::uint64_t> histogram;
  std::map<BlockLabel, std::uint64_t> labels;
  std::vector<OutcomeRecord> records;
};

Engine chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return Engine(seq);
}

Estimate estimate(const CompensatedSum& sum, const CompensatedSum& squares, std::uint64_t count) {
  Estimate e;
  const auto t = static_cast<double>(count);
  e.mean = sum.value() / t;
  if (count > 1) {
    const double var = std::max(0.0, (squares.value() - sum.value() * e.mean) / (t - 1.0));
    e.std_error = std::sqrt(var / t);
  }
  return e;
}

SimulationSummary simulate(int n, double lambda, std::uint64_t trials, std::uint64_t seed,
                           bool track_labels, const Sampler& sample,
                           const ProtocolOptions& options) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const std::uint64_t chunks = (trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  std::vector<ChunkTally> tallies(chunks);
  const bool keep_records = options.trace != nullptr;

  auto run_chunk = [&](std::uint64_t c) {
    ChunkTally& tally = tallies[c];
    tally.histogram.assign(n / 2 + 1, 0);
    Engine engine = chunk_engine(seed, c);
    const std::uint64_t begin = c * kTrialsPerChunk;
    const std::uint64_t end = std::min(trials, begin + kTrialsPerChunk);
    for (std::uint64_t t = begin; t < end; ++t) {
      OutcomeRecord r = sample(engine, t);
      const double kept = static_cast<double>(r.kept_qubits) / n;
      tally.yield_sum += kept;
      tally.yield_squares += kept * kept;
      tally.fidelity_sum += r.fidelity;
      tally.fidelity_squares += r.fidelity * r.fidelity;
      ++tally.histogram[r.j];
      if (track_labels) ++tally.labels[BlockLabel{r.j, r.alpha.convert_to<int>()}];
      if (keep_records) tally.records.push_back(std::move(r));
    }
  };

  unsigned workers = options.workers == 0 ? std::thread::hardware_concurrency() : options.workers;
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, chunks));
  if (workers == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Reduce in chunk order so the result is independent of scheduling.
  ChunkTally total;
  total.histogram.assign(n / 2 + 1, 0);
  for (auto& tally : tallies) {
    total.yield_sum.merge(tally.yield_sum);
    total.yield_squares.merge(tally.yield_squares);
    total.fidelity_sum.merge(tally.fidelity_sum);
    total.fidelity_squares.merge(tally.fidelity_squares);
    for (std::size_t j = 0; j < tally.histogram.size(); ++j) total.histogram[j] += tally.histogram[j];
    for (const auto& [label, count] : tally.labels) total.labels[label] += count;
    if (keep_records) {
      for (auto& r : tally.records) options.trace->push_back(std::move(r));
    }
  }

  SimulationSummary s;
  s.n = n;
  s.lambda = lambda;
  s.trials = trials;
  s.seed = seed;
  s.yield = estimate(total.yield_sum, total.yield_squares, trials);
  s.mean_fidelity = estimate(total.fidelity_sum, total.fidelity_squares, trials);
  s.histogram = std::move(total.histogram);
  s.label_counts = std::move(total.labels);
  return s;
}

// Index of the cell containing u * total within a cumulative table.
std::size_t pick(const std::vector<double>& cumulative, double u) {
  const double x = u * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                               cumulative.size() - 1);
}

void check_even(int n) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("N must be even");
}

}  // namespace

SimulationSummary run_protocol(const MixedQubit& q, int n, std::uint64_t trials,
                               std::uint64_t seed, const ProtocolOptions& options) {
  check_even(n);
  const int spin_max = n / 2;
  std::vector<double> cumulative;
  const std::vector<BigInt> d_table = multiplicities(n);
  std::vector<double> fidelities;
  double running = 0.0;
  BigInt label_total = 0;
  for (int j = 0; j <= spin_max; ++j) {
    running += block_probability(n, q.lambda(), j);
    cumulative.push_back(running);
    label_total += d_table[j];
    fidelities.push_back(block_fidelity(q.lambda(), j));
  }
  const bool track_labels = label_total <= kMaxTrackedLabels;
  const BigInt u64_max = std::numeric_limits<std::uint64_t>::max();

  auto sample = [&](Engine& engine, std::uint64_t trial) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    OutcomeRecord r;
    r.trial = trial;
    r.j = static_cast<int>(pick(cumulative, uniform(engine)));
    const BigInt& d = d_table[r.j];
    if (d <= u64_max) {
      std::uniform_int_distribution<std::uint64_t> pick_alpha(1, d.convert_to<std::uint64_t>());
      r.alpha = pick_alpha(engine);
    } else {
      boost::random::uniform_int_distribution<BigInt> pick_alpha(1, d);
      r.alpha = pick_alpha(engine);
    }
    r.kept_qubits = 2 * r.j;
    r.fidelity = fidelities[r.j];
    return r;
  };
  return simulate(n, q.lambda(), trials, seed, track_labels, sample, options);
}

SimulationSummary run_protocol_dense(const MixedQubit& q, const SchurBasis& basis,
                                     std::uint64_t trials, std::uint64_t seed,
                                     const ProtocolOptions& options) {
  const int n = basis.qubits();
  const DenseOperator product = kron_power(density_matrix(q), n, n);
  const StateVector target = qubit_eigenstates(q).first;
  const auto labels = basis.labels();

  std::vector<double> cumulative;
  std::vector<double> fidelities;
  double running = 0.0;
  for (const auto& label : labels) {
    const BlockMeasurement m = measure_block(product, basis, label);
    running += std::max(0.0, m.probability);
    cumulative.push_back(running);
    double f = zero_block_fidelity(q.lambda());
    if (label.j >= 1 && m.post_state) {
      const DenseOperator kept = purify_block(product, basis, label) / m.probability;
      const auto per_qubit = single_qubit_fidelities(kept, target);
      CompensatedSum sum;
      for (double x : per_qubit) sum += x;
      f = sum.value() / static_cast<double>(per_qubit.size());
    }
    fidelities.push_back(f);
  }
  const bool track_labels = labels.size() <= kMaxTrackedLabels;

  auto sample = [&](Engine& engine, std::uint64_t trial) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::size_t idx = pick(cumulative, uniform(engine));
    OutcomeRecord r;
    r.trial = trial;
    r.j = labels[idx].j;
    r.alpha = labels[idx].alpha;
    r.kept_qubits = 2 * r.j;
    r.fidelity = fidelities[idx];
    return r;
  };
  return simulate(n, q.lambda(), trials, seed, track_labels, sample, options);
}

void write_trials_csv(std::ostream& out, const std::vector<OutcomeRecord>& records,
                      char separator) {
  out << "trial" << separator << "j" << separator << "alpha" << separator << "kept" << separator
      << "fidelity\n";
  for (const auto& r : records) {
    out << r.trial << separator << r.j << separator << r.alpha << separator << r.kept_qubits
        << separator << format_double(r.fidelity) << '\n';
  }
}

}  // namespace qpurify
