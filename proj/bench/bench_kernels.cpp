// OpenMP kernels against their serial references. Run with
// OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <numbers>

#include "uniteig/embedding.hpp"
#include "uniteig/fixtures.hpp"
#include "uniteig/matcore.hpp"
#include "uniteig/realeig.hpp"
#include "uniteig/recover.hpp"

namespace {

using namespace uniteig;

ComplexMatrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  DeviateStream s(seed);
  ComplexMatrix m(rows, cols);
  for (cplx& x : m.data()) x = s.complex_normal();
  return m;
}

void BM_gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix a = gaussian(n, n, 1), b = gaussian(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gemm(a, b));
  state.SetComplexityN(state.range(0));
}

void BM_gemm_reference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix a = gaussian(n, n, 1), b = gaussian(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::gemm(a, b));
  state.SetComplexityN(state.range(0));
}

void BM_svd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix a = gaussian(n, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(svd(a));
}

void BM_svd_reference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix a = gaussian(n, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::svd(a));
}

// n / 4 distinct phases with multiplicity 4, so recover has many groups.
EigenDecomposition planted_eig(std::size_t n) {
  SpectrumSpec spec;
  spec.seed = 9;
  for (std::size_t k = 0; k < n / 4; ++k) {
    spec.items.push_back({-3.0 + 6.0 * static_cast<double>(k) / static_cast<double>(n / 4), 4});
  }
  return real_normal_eig(embed(planted_unitary(spec).u));
}

void BM_recover(benchmark::State& state, bool parallel) {
  const EigenDecomposition e = planted_eig(static_cast<std::size_t>(state.range(0)));
  RecoverOptions opts;
  opts.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(recover(e, opts));
}

void BM_real_normal_eig(benchmark::State& state) {
  const RealEmbedding m = embed(haar_unitary(static_cast<std::size_t>(state.range(0)), 4));
  for (auto _ : state) benchmark::DoNotOptimize(real_normal_eig(m));
}

}  // namespace

BENCHMARK(BM_gemm)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gemm_reference)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_svd)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_svd_reference)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_recover, parallel, true)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_recover, serial, false)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_real_normal_eig)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
