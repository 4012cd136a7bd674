// Microbenchmarks for the transform and operator layer: plain DCTs, the
// Haar wavelet, and the matrix-free sampling operators the solvers loop over.

#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include <memory>

#include "onel1/dct.hpp"
#include "onel1/experiments.hpp"
#include "onel1/operators.hpp"
#include "onel1/rng.hpp"
#include "onel1/wavelet.hpp"

namespace {

using namespace onel1;

Eigen::VectorXd random_vector(int N, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd v(N);
  for (int i = 0; i < N; ++i) v[i] = rng.normal();
  return v;
}

void BM_Dct1dForward(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Eigen::VectorXd x = random_vector(N, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dct_forward(x));
  }
  state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_Dct1dForward)->Arg(256)->Arg(1024)->Arg(4096)->Arg(16384)
    ->Unit(benchmark::kMicrosecond);

void BM_Dct2dForward(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(2);
  Eigen::MatrixXd img(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) img(r, c) = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dct2_forward(img));
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_Dct2dForward)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_PartialDctApply(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const int n = N / 5;
  Rng rng(3);
  const auto op = make_partial_dct(N, SamplingMask::sample_uniform_1d(N, n, rng));
  const Eigen::VectorXd x = random_vector(N, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op->apply(x));
  }
}
BENCHMARK(BM_PartialDctApply)->Arg(1024)->Arg(4096)->Arg(16384)
    ->Unit(benchmark::kMicrosecond);

void BM_PartialDctAdjoint(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const int n = N / 5;
  Rng rng(5);
  const auto op = make_partial_dct(N, SamplingMask::sample_uniform_1d(N, n, rng));
  const Eigen::VectorXd z = random_vector(n, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op->adjoint(z));
  }
}
BENCHMARK(BM_PartialDctAdjoint)->Arg(1024)->Arg(4096)->Arg(16384)
    ->Unit(benchmark::kMicrosecond);

void BM_WaveletForward(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const WaveletTransform wavelet(side, side, 4);
  Rng rng(7);
  Eigen::MatrixXd img(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) img(r, c) = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(wavelet.forward(img));
  }
}
BENCHMARK(BM_WaveletForward)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_ComposedImageOperatorApply(benchmark::State& state) {
  // The image-demo operator: partial 2-D DCT composed with Haar synthesis.
  const int side = 256;
  auto sampler = std::shared_ptr<const SamplingOperator>(make_partial_dct(
      side * side, generate_mri_pattern(side, side, 7419, 9)));
  const auto op =
      compose_synthesis_operator(sampler, WaveletTransform(side, side, 4));
  const Eigen::VectorXd x = random_vector(side * side, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op->apply(x));
  }
}
BENCHMARK(BM_ComposedImageOperatorApply)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
