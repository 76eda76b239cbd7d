// Hot-path timings: spectral transforms, the advective bracket, and a full
// integrating-factor RK4 step, across the resolutions the CLI defaults span.
#include <benchmark/benchmark.h>

#include <random>

#include "sphereflow/dynamics.hpp"

using namespace sphereflow;

namespace {

// Band-limited random vorticity with a modest advective speed so the step
// benchmark runs inside the stability bound at dt = 1e-3.
SpectralScalar random_vorticity(int L) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  SpectralScalar zeta(L, 1.0);
  for (int l = 1; l <= L / 2; ++l) {
    const double w = 1.0 / (1.0 + l);
    for (int m = 0; m <= l; ++m)
      zeta.at(l, m) = {w * dist(rng), m == 0 ? 0.0 : w * dist(rng)};
  }
  const Model model(L, 1.0);
  const double ms = max_speed(velocity_from_stream(
      model.transform(), StreamFunction(stream_of_vorticity(zeta))));
  for (auto& c : zeta.c) c *= 0.1 / ms;
  return zeta;
}

void bm_analyze(benchmark::State& state) {
  const int L = int(state.range(0));
  const Model model(L, 1.0);
  const GridScalar h = model.transform().synthesize(random_vorticity(L));
  for (auto _ : state)
    benchmark::DoNotOptimize(model.transform().analyze(h));
}

void bm_synthesize(benchmark::State& state) {
  const int L = int(state.range(0));
  const Model model(L, 1.0);
  const SpectralScalar zeta = random_vorticity(L);
  for (auto _ : state)
    benchmark::DoNotOptimize(model.transform().synthesize(zeta));
}

void bm_jet(benchmark::State& state) {
  const int L = int(state.range(0));
  const Model model(L, 1.0);
  const SpectralScalar zeta = random_vorticity(L);
  for (auto _ : state)
    benchmark::DoNotOptimize(model.transform().jet(zeta, 1));
}

void bm_jacobian(benchmark::State& state) {
  const int L = int(state.range(0));
  const Model model(L, 1.0);
  const SpectralScalar zeta = random_vorticity(L);
  const SpectralScalar psi = stream_of_vorticity(zeta);
  for (auto _ : state)
    benchmark::DoNotOptimize(jacobian(model.transform(), psi, zeta));
}

void bm_step(benchmark::State& state) {
  const int L = int(state.range(0));
  const Model model(L, 1.0);
  SimParams params;
  params.omega = 1.0;
  params.mu_s = 0.01;
  params.dt = 1e-3;
  SimState sim{0.0, random_vorticity(L)};
  for (auto _ : state) step(model, sim, params);
}

}  // namespace

BENCHMARK(bm_analyze)->Arg(15)->Arg(31)->Arg(63)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_synthesize)->Arg(15)->Arg(31)->Arg(63)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_jet)->Arg(15)->Arg(31)->Arg(63)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_jacobian)->Arg(15)->Arg(31)->Arg(63)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_step)->Arg(15)->Arg(31)->Arg(63)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
