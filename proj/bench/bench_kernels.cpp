// Serial reference vs OpenMP path for the three data-parallel kernels.

#include <benchmark/benchmark.h>

#include "ramsim/quadrature.hpp"
#include "ramsim/spectra.hpp"
#include "ramsim/timeseries.hpp"

using namespace ramsim;

namespace {

parallel::Exec mode(const benchmark::State& state) {
  return state.range(0) ? parallel::Exec::Parallel : parallel::Exec::Serial;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_Quadrature(benchmark::State& state) {
  QuadratureOptions opt;
  opt.exec = mode(state);
  const SpatialMode a{2e-3, 0.3e-3, 0.0}, b{2e-3, -0.2e-3, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(overlap_quadrature_oracle(a, b, HalfPlaneScreen{0.1e-3}, opt));
  label(state);
}

void BM_Synthesis(benchmark::State& state) {
  const HarmonicSet h({cplx{1.0}, cplx{0.01, 0.002}, cplx{1e-4}}, false);
  NoiseSpec noise;
  noise.rin_level = 1e-3;
  for (auto _ : state)
    benchmark::DoNotOptimize(synthesize_timeseries(h, 2.5e6, 20e6, 0.05, noise, std::nullopt, mode(state)));
  label(state);
}

void BM_Welch(benchmark::State& state) {
  SpectrumRequest req;
  req.rbw_hz = 300.0;
  req.exec = mode(state);
  const HarmonicSet h({cplx{1.0}, cplx{0.01}}, false);
  NoiseSpec noise;
  noise.rin_level = 1e-3;
  const auto x = synthesize_timeseries(h, 2.5e6, req.f_s, 4 * minimum_duration(req), noise);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_psd(x, req));
  label(state);
}

}  // namespace

BENCHMARK(BM_Quadrature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Synthesis)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Welch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
