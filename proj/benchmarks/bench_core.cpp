#include <benchmark/benchmark.h>
#include <pdmsusy/pdmsusy.hpp>

using namespace pdmsusy;

namespace {

LadderSystem cosine(std::size_t n) {
  return build_ladder_system(cosine_profile(1.15), 1.0, build_grid(-8.64, 8.64, n));
}

void BM_EllipticE(benchmark::State& state) {
  double phi = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(incomplete_elliptic_e(phi, 0.93));
    phi += 1e-3;
  }
}
BENCHMARK(BM_EllipticE);

void BM_BuildLadder(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cosine(n));
}
BENCHMARK(BM_BuildLadder)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_StateTower(benchmark::State& state) {
  const auto sys = cosine(4001);
  for (auto _ : state) benchmark::DoNotOptimize(state_tower(sys, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_StateTower)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_OracleSpectrum(benchmark::State& state) {
  const auto sys = cosine(static_cast<std::size_t>(state.range(0)));
  const auto op = discretize(sys.profile, sys.potential);
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectrum(op, 6, sys.profile));
}
BENCHMARK(BM_OracleSpectrum)->Arg(1001)->Arg(4001)->Arg(16001)->Unit(benchmark::kMillisecond);

void BM_SecondOrderTransform(benchmark::State& state) {
  const auto sys = cosine(4001);
  const auto tower = state_tower(sys, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        second_order_nonconfluent(sys, tower[1].wavefunction, 1.5, tower[2].wavefunction, 2.5));
  }
}
BENCHMARK(BM_SecondOrderTransform)->Unit(benchmark::kMillisecond);

void BM_CriticalD(benchmark::State& state) {
  const auto sys = cosine(4001);
  const auto u = nth_state(sys, 1).bare();
  for (auto _ : state) benchmark::DoNotOptimize(critical_d(u));
}
BENCHMARK(BM_CriticalD)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
