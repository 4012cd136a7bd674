// End-to-end solver benchmarks on a fixed desk-scale cell (N = 4096,
// delta = 0.2): one full solve per benchmark iteration.

#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include <memory>

#include "onel1/experiments.hpp"
#include "onel1/operators.hpp"
#include "onel1/rng.hpp"
#include "onel1/solvers.hpp"

namespace {

using namespace onel1;

struct DeskInstance {
  std::unique_ptr<SamplingOperator> op;
  Eigen::VectorXd b;
};

DeskInstance make_desk_instance(double rho) {
  const int N = 4096;
  const int n = 820;  // ceil(0.2 * 4096)
  const int k = static_cast<int>(std::ceil(rho * n));
  DeskInstance inst;
  inst.op = make_ensemble_operator(Ensemble::PartialDct, n, N, 11);
  inst.b = inst.op->apply(generate_sparse_signal(N, k, 12));
  return inst;
}

void BM_RoneL1Desk(benchmark::State& state) {
  const auto inst = make_desk_instance(state.range(0) / 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_rone_l1(*inst.op, inst.b, {}));
  }
}
BENCHMARK(BM_RoneL1Desk)->Arg(10)->Arg(22)->Unit(benchmark::kMillisecond);

void BM_EoneL1Desk(benchmark::State& state) {
  const auto inst = make_desk_instance(state.range(0) / 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_eone_l1(*inst.op, inst.b, {}));
  }
}
BENCHMARK(BM_EoneL1Desk)->Arg(10)->Arg(22)->Unit(benchmark::kMillisecond);

void BM_IstDesk(benchmark::State& state) {
  const auto inst = make_desk_instance(0.10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_ist(*inst.op, inst.b, IstMode::continuation(), {}));
  }
}
BENCHMARK(BM_IstDesk)->Unit(benchmark::kMillisecond);

void BM_AmpDesk(benchmark::State& state) {
  const auto inst = make_desk_instance(0.10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_amp(*inst.op, inst.b, {}));
  }
}
BENCHMARK(BM_AmpDesk)->Unit(benchmark::kMillisecond);

void BM_Mu0Quantile(benchmark::State& state) {
  const auto inst = make_desk_instance(0.10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mu0_from_quantile(*inst.op, inst.b, 0.99));
  }
}
BENCHMARK(BM_Mu0Quantile)->Unit(benchmark::kMicrosecond);

void BM_SoftThreshold(benchmark::State& state) {
  Rng rng(13);
  const int N = 1 << 20;
  Eigen::VectorXd w(N);
  for (int i = 0; i < N; ++i) w[i] = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(soft_threshold(w, 0.5));
  }
  state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_SoftThreshold)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
