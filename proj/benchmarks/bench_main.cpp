// Microbenchmarks for the assembly and solver hot paths.

#include <benchmark/benchmark.h>

#include "qopdd/campaign.hpp"
#include "qopdd/post.hpp"
#include "qopdd/precond.hpp"

namespace {

using namespace qopdd;
const double TWO_PI = 2.0 * PI;
const QuasiPeriodicity QP0{0.0, TWO_PI};

void BM_WindowedGreenValue(benchmark::State& state) {
  const WindowedGreenParams p{Complex{4.3, 0.0}, 0.0, TWO_PI, 120.0};
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(windowed_qp_green(p, x, 0.7));
    x += 1e-6;
  }
}
BENCHMARK(BM_WindowedGreenValue);

void BM_SingleLayerAssembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto prof = GratingProfile::cosine_series(0.0, 0.1, {2.5}, {}, TWO_PI);
  auto grid = build_grid(prof, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        assemble_single_layer(Complex{4.3, 0.0}, grid, grid, QP0, 120.0).matrix.sum());
  state.SetComplexityN(n);
}
BENCHMARK(BM_SingleLayerAssembly)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_LayerRtR(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto top = GratingProfile::cosine_series(0.0, 0.02, {2.5}, {}, TWO_PI);
  const auto bot = GratingProfile::cosine_series(-3.3, 0.02, {2.5}, {}, TWO_PI);
  const Matrix Z = flat_transmission(4.3, 0.8, QP0, n).mat;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        rtr_layer(Complex{4.3, 0.0}, top, bot, Z, Z, Z, Z, QP0, n, 120.0).tt.sum());
}
BENCHMARK(BM_LayerRtR)->Arg(64)->Arg(128);

void BM_SweepApply(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  LayerStack stack;
  stack.qp = QP0;
  for (int l = 0; l <= N; ++l)
    stack.profiles.push_back(GratingProfile::cosine_series(-3.3 * l, 0.02, {2.5}, {}, TWO_PI));
  for (int l = 0; l <= N + 1; ++l) stack.wavenumbers.push_back(l + 1.3);
  AssemblyOptions opts;
  opts.n = 64;
  opts.A = 120.0;
  opts.scheme = Scheme::layer_slab;
  BiopsCache cache;
  opts.cache = &cache;
  const auto sys = assemble_system(stack, opts);
  const auto factors = SweepFactors::make(sys, PrecondMode::sweep);
  const Vector r = Vector::Random(sys.dim());
  for (auto _ : state) benchmark::DoNotOptimize(apply_sweep(factors, r).sum());
}
BENCHMARK(BM_SweepApply)->Arg(5)->Arg(9);

void BM_BlockMatvec(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  LayerStack stack;
  stack.qp = QP0;
  for (int l = 0; l <= N; ++l)
    stack.profiles.push_back(GratingProfile::cosine_series(-3.3 * l, 0.02, {2.5}, {}, TWO_PI));
  for (int l = 0; l <= N + 1; ++l) stack.wavenumbers.push_back(l + 1.3);
  AssemblyOptions opts;
  opts.n = 64;
  opts.A = 120.0;
  opts.scheme = Scheme::layer_slab;
  BiopsCache cache;
  opts.cache = &cache;
  const auto sys = assemble_system(stack, opts);
  const Vector x = Vector::Random(sys.dim());
  for (auto _ : state) benchmark::DoNotOptimize(sys.apply(x).sum());
}
BENCHMARK(BM_BlockMatvec)->Arg(5)->Arg(9);

}  // namespace

BENCHMARK_MAIN();
