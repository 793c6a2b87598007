#include <benchmark/benchmark.h>

#include "kohnbound/bounds.hpp"
#include "kohnbound/hermitian.hpp"
#include "kohnbound/kohn.hpp"
#include "kohnbound/metric.hpp"
#include "kohnbound/surface.hpp"

namespace {

using namespace kohnbound;

DefiningFunction bench_surface() { return make_ellipsoid({0.5, 0.0, 0.3}); }

void BM_Jet(benchmark::State& state) {
  const DefiningFunction f = bench_surface();
  const CVec z = {cplx(0.3, 0.1), cplx(0.2, -0.4), cplx(0.1, 0.5)};
  for (auto _ : state) benchmark::DoNotOptimize(f.jet(z));
}
BENCHMARK(BM_Jet);

void BM_MetricAt(benchmark::State& state) {
  const DefiningFunction f = bench_surface();
  const CVec z = {cplx(0.3, 0.1), cplx(0.2, -0.4), cplx(0.1, 0.5)};
  for (auto _ : state) benchmark::DoNotOptimize(metric_at(f, z));
}
BENCHMARK(BM_MetricAt);

void BM_HermitianEig(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  CMat a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      a(i, j) = cplx(1.0 / (1.0 + i + j), static_cast<double>(i) - j);
      if (i == j) a(i, j) = cplx(3.0 + static_cast<double>(i), 0.0);
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) a(i, j) = std::conj(a(j, i));
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(a));
}
BENCHMARK(BM_HermitianEig)->Arg(3)->Arg(6);

void BM_SampleSurface(benchmark::State& state) {
  const DefiningFunction f = bench_surface();
  QuadratureSpec spec;
  spec.count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_surface(f, 1.0, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleSurface)->Arg(1000)->Arg(10000);

void BM_KohnTrace(benchmark::State& state) {
  const DefiningFunction f = bench_surface();
  const CVec z = {cplx(0.3, 0.1), cplx(0.2, -0.4), cplx(0.1, 0.5)};
  const MetricPoint mp = metric_at(f, z);
  ComplexPolynomial u(3);
  u.add_term({1, 0, 0, 0, 1, 0}, cplx(1.0, 0.5));
  u.add_term({0, 2, 0, 1, 0, 0}, cplx(-0.3, 0.2));
  const TrialFunction trial(u);
  const AmbientJet jet = trial.jet(z);
  for (auto _ : state) benchmark::DoNotOptimize(kohn_apply_trace(mp, jet));
}
BENCHMARK(BM_KohnTrace);

}  // namespace

BENCHMARK_MAIN();
