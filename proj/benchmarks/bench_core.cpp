#include <random>

#include <benchmark/benchmark.h>

#include "fdl/carleman.hpp"
#include "fdl/extension.hpp"
#include "fdl/inverse.hpp"
#include "fdl/kernel.hpp"
#include "fdl/lattice.hpp"
#include "fdl/torus.hpp"

namespace {

using namespace fdl;

TorusFunction random_torus(long N, int d) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  TorusFunction v(N, d);
  for (double& x : v.values()) x = normal(rng);
  return v;
}

void BM_Kernel1d(benchmark::State& state) {
  const FracParams p(0.37, 1.0, 1);
  long m = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_1d(p, m));
    m = m % 1000 + 1;
  }
}
BENCHMARK(BM_Kernel1d);

void BM_KernelNd(benchmark::State& state) {
  const FracParams p(0.37, 1.0, static_cast<int>(state.range(0)));
  Site m(static_cast<std::size_t>(state.range(0)), 1);
  m[0] = 3;
  for (auto _ : state) benchmark::DoNotOptimize(kernel_nd(p, m).value);
}
BENCHMARK(BM_KernelNd)->Arg(1)->Arg(2)->Arg(3);

void BM_KernelTable(benchmark::State& state) {
  const FracParams p(0.5, 1.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(KernelTable(p, state.range(0)));
}
BENCHMARK(BM_KernelTable)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_TorusKernel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(TorusKernel(state.range(0), 2, 0.5));
}
BENCHMARK(BM_TorusKernel)->Arg(6)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ApplySpectral(benchmark::State& state) {
  const TorusFunction v = random_torus(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_frac_torus_spectral(v, 0.5));
}
BENCHMARK(BM_ApplySpectral)->Arg(8)->Arg(32)->Arg(64);

void BM_ApplyPointwise(benchmark::State& state) {
  const TorusKernel kernel(state.range(0), 2, 0.5);
  const TorusFunction v = random_torus(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_frac_torus_pointwise(v, kernel));
}
BENCHMARK(BM_ApplyPointwise)->Arg(8)->Arg(16);

void BM_LatticeStep1d(benchmark::State& state) {
  const FracParams p(0.5, 1.0, 1);
  StepProfile step;
  step.left = -1.0;
  step.right = 1.0;
  const LatticeFunction u(p, LatticeFunction::Shape(step));
  const LatticeOperator op(p, 64);
  long j = -50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply(u, Site{j}).value);
    j = j == 50 ? -50 : j + 1;
  }
}
BENCHMARK(BM_LatticeStep1d);

void BM_NeumannTrace(benchmark::State& state) {
  const TorusFunction v = random_torus(state.range(0), 2);
  const auto grid = geometric_grid(1e-6, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(neumann_trace(cs_extend_torus(v, 0.3, grid), 20));
}
BENCHMARK(BM_NeumannTrace)->Arg(6)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Commutator(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  SparseValues v;
  for (long a = -10; a <= 10; ++a) {
    for (long b = -10; b <= 10; ++b) v[{a, b}] = normal(rng);
  }
  const CarlemanConfig cfg(1.0, 4.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(tangential_commutator_check(cfg, v).defect);
}
BENCHMARK(BM_Commutator)->Unit(benchmark::kMillisecond);

void BM_RecoveryTrial(benchmark::State& state) {
  const InverseSetup setup = standard_inverse_setup(3, 0);
  const Eigen::MatrixXd A = forward_matrix(setup);
  const Eigen::MatrixXd P = h1_gram(setup);
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(recovery_trial(A, P, 1e-3, 0, trial++).error);
}
BENCHMARK(BM_RecoveryTrial)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
