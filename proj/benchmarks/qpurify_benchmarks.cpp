#include <benchmark/benchmark.h>

#include "qpurify/analytics.hpp"
#include "qpurify/blocks.hpp"
#include "qpurify/cloning.hpp"
#include "qpurify/oracle.hpp"
#include "qpurify/protocol.hpp"

namespace {

using namespace qpurify;

void BM_BuildSchurBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_schur_basis(n));
}
BENCHMARK(BM_BuildSchurBasis)->DenseRange(4, 12, 2)->Unit(benchmark::kMillisecond);

void BM_KronPower(benchmark::State& state) {
  const DenseOperator rho = density_matrix(MixedQubit(0.6, {1.0, 2.0, 2.0}));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kron_power(rho, n));
}
BENCHMARK(BM_KronPower)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);

void BM_BlockSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(block_spectrum(n, 0.6));
}
BENCHMARK(BM_BlockSpectrum)->RangeMultiplier(4)->Range(16, 4096);

void BM_EstimationLambda(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimation_lambda(n, 0.4));
}
BENCHMARK(BM_EstimationLambda)->RangeMultiplier(4)->Range(16, 4096);

void BM_RunProtocol(benchmark::State& state) {
  const MixedQubit q(0.6);
  ProtocolOptions options;
  options.workers = 1;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(q, n, 100000, 42, options));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_RunProtocol)->Arg(20)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_VerifyDecomposition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SchurBasis basis = build_schur_basis(n);
  const MixedQubit q(0.37, {1.0, 2.0, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(verify_decomposition(q, basis, 1e-9));
}
BENCHMARK(BM_VerifyDecomposition)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_OptimalityScan(benchmark::State& state) {
  const MixedQubit q(0.7, {0.0, 0.0, 1.0});
  const int j = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(optimality_scan(q, j, 21));
}
BENCHMARK(BM_OptimalityScan)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
