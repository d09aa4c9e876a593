#include <benchmark/benchmark.h>

#include "floquet/capacitance.hpp"
#include "floquet/hill.hpp"
#include "floquet/honeycomb.hpp"
#include "floquet/normal_form.hpp"
#include "floquet/synthetic.hpp"
#include "floquet/tracking.hpp"

using namespace floquet;

namespace {

const ResonatorLattice& lattice() {
  static const ResonatorLattice lat = build_geometry();
  return lat;
}

Vec2 mid_gamma_k() { return 0.5 * symmetry_points(lattice()).K; }

void BM_MonodromyRandom(benchmark::State& state) {
  const ParamPeriodicLODE sys = random_periodic_system(static_cast<int>(state.range(0)), 11);
  IntegratorConfig cfg;
  cfg.steps = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_monodromy(sys, ParamPoint::Constant(1, 0.3), cfg));
}
BENCHMARK(BM_MonodromyRandom)->Arg(2)->Arg(6)->Arg(12);

void BM_Decompose(benchmark::State& state) {
  const ParamPeriodicLODE sys = random_periodic_system(6, 12);
  const FundamentalPath path = integrate_fundamental(sys, ParamPoint::Constant(1, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(path, sys.period()));
}
BENCHMARK(BM_Decompose);

void BM_Capacitance(benchmark::State& state) {
  CapacitanceOptions opts;
  opts.quad_points = static_cast<int>(state.range(0));
  const Vec2 alpha = mid_gamma_k();
  for (auto _ : state) benchmark::DoNotOptimize(capacitance_matrix(lattice(), alpha, opts));
}
BENCHMARK(BM_Capacitance)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_HillMonodromy(benchmark::State& state) {
  const CapacitanceMatrix c = capacitance_matrix(lattice(), mid_gamma_k());
  const ParamPeriodicLODE sys = hill_system(lattice(), c, demo_strong());
  for (auto _ : state) benchmark::DoNotOptimize(integrate_monodromy(sys, ParamPoint::Zero(1)));
}
BENCHMARK(BM_HillMonodromy)->Unit(benchmark::kMillisecond);

void BM_SyntheticSweep(benchmark::State& state) {
  const ParamPeriodicLODE sys = synthetic_braid_system();
  const ParameterLoop loop = straight_loop(ParamPoint::Zero(1), ParamPoint::Constant(1, kTwoPi),
                                           static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_loop(sys, loop));
}
BENCHMARK(BM_SyntheticSweep)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
