// Serial reference vs OpenMP for the trajectory ensemble and parameter sweeps.
#include <benchmark/benchmark.h>

#include "trapcool/commands.hpp"
#include "trapcool/ensemble.hpp"
#include "trapcool/validation.hpp"

using namespace trapcool;

namespace {

IntegratorConfig bench_integrator() {
  IntegratorConfig cfg;
  cfg.dt = 0.0025;
  cfg.t_final = 1.0;
  cfg.scheme = Scheme::kraus_euler;
  cfg.record_every = 40;
  return cfg;
}

EnsembleOptions bench_options() {
  EnsembleOptions eo;
  eo.n_traj = 16;
  return eo;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const SystemParams p = rescaled_params();
  const FockBasisSpec spec{26, 1e-8};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ensemble_serial(p, spec, bench_integrator(), true, bench_options()));
  }
}

void BM_EnsembleParallel(benchmark::State& state) {
  const SystemParams p = rescaled_params();
  const FockBasisSpec spec{26, 1e-8};
  EnsembleOptions eo = bench_options();
  eo.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ensemble(p, spec, bench_integrator(), true, eo));
  }
}

void BM_SweepSerial(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.n_trunc = 20;
  const auto values = parse_sweep_values("log:0.05:5:16");
  for (auto _ : state) benchmark::DoNotOptimize(sweep_rows_serial(cfg, "g", values));
}

void BM_SweepParallel(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.n_trunc = 20;
  const auto values = parse_sweep_values("log:0.05:5:16");
  const RunOptions run{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(sweep_rows(cfg, "g", values, run));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
