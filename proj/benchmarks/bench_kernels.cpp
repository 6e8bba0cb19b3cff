#include "srpulse/cumulant.hpp"
#include "srpulse/lindblad.hpp"
#include "srpulse/observables.hpp"
#include "srpulse/trajectories.hpp"

#include <benchmark/benchmark.h>

using namespace srpulse;

namespace {

DensityMatrix pulse_state(int n) {
  DensityMatrix rho = projector(coherent_state(n, 1.2, 0.4));
  rho = 0.7 * rho + 0.3 * projector(coherent_state(n, 1.9, 2.0));
  return rho;
}

void BM_LindbladRhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
  const DensityMatrix rho = pulse_state(n);
  DensityMatrix out(n + 1, n + 1);
  for (auto _ : state) {
    lindblad_rhs(rho, p, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_LindbladRhs)->RangeMultiplier(2)->Range(50, 800)->Complexity(benchmark::oNSquared);

void BM_MomentRhs(benchmark::State& state) {
  const ModelParams p = ModelParams::create(200, 1.0, 5.0, 0.5);
  const MomentState s = MomentState::from_state(coherent_state(200, 1.0, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(moment_rhs(s, p));
}
BENCHMARK(BM_MomentRhs);

void BM_QFunction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho = pulse_state(n);
  for (auto _ : state) benchmark::DoNotOptimize(q_function(rho).values.data());
}
BENCHMARK(BM_QFunction)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ChiSquared(benchmark::State& state) {
  const DensityMatrix rho = pulse_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(chi_squared(rho));
}
BENCHMARK(BM_ChiSquared)->Arg(200);

void BM_CTotal3(benchmark::State& state) {
  const DensityMatrix rho = pulse_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(c_total(rho, 3));
}
BENCHMARK(BM_CTotal3)->Arg(200);

void BM_Trajectory(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
  const DickeVector psi = coherent_state(n, 0.3, 1.5);
  TrajectoryConfig c;
  for (int i = 0; i <= 100; ++i) c.sample_times.push_back(8.0 * i);
  std::size_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_trajectory(psi, p, 0.0, c, index++));
}
BENCHMARK(BM_Trajectory)->Arg(20)->Arg(200)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
