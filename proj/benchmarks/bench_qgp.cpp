#include <benchmark/benchmark.h>

#include <vector>

#include "qgp/experiments.hpp"
#include "qgp/gp.hpp"
#include "qgp/quantum_kernel.hpp"
#include "qgp/rng.hpp"

namespace {

qgp::QuantumKernelParams bench_params(int m) {
  qgp::QuantumKernelParams p;
  p.theta_single.assign(m, 1.3);
  p.theta_pair = 2.0;
  p.entangled = true;
  return p;
}

std::vector<qgp::InputVector> random_points(int n, int dim, qgp::Rng& rng) {
  std::vector<qgp::InputVector> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    qgp::InputVector x(dim);
    for (int d = 0; d < dim; ++d) {
      x[d] = rng.uniform(0.5, 3.0);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

void BM_PrepareState(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto params = bench_params(m);
  qgp::Rng rng(1);
  const auto pts = random_points(1, m, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qgp::prepare_state(pts[0], params));
  }
}
BENCHMARK(BM_PrepareState)->Arg(6)->Arg(10)->Arg(14);

void BM_KernelExact(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto params = bench_params(m);
  qgp::Rng rng(2);
  const auto pts = random_points(2, m, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qgp::kernel_exact(pts[0], pts[1], params));
  }
}
BENCHMARK(BM_KernelExact)->Arg(6)->Arg(10);

void BM_GramMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto params = bench_params(6);
  qgp::Rng rng(3);
  const auto pts = random_points(n, 6, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qgp::gram_matrix(pts, params));
  }
}
BENCHMARK(BM_GramMatrix)->Arg(100)->Arg(400);

void BM_GpFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  qgp::Rng rng(4);
  const auto pts = random_points(n, 6, rng);
  std::vector<double> y;
  y.reserve(n);
  for (const auto& x : pts) {
    y.push_back(qgp::synth_pes(x));
  }
  const auto kernel = qgp::KernelConfig::make_quantum(bench_params(6));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qgp::gp_fit(pts, y, kernel, 0.0));
  }
}
BENCHMARK(BM_GpFit)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
