// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to vary the team.

#include <benchmark/benchmark.h>

#include <random>

#include "hwgrowth/bounds.hpp"

namespace {

using namespace hwgrowth;

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void BM_MaxTableBuild(benchmark::State& state) {
  const KernelContext ctx(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(build_max_table(ctx, mode(state)));
}
BENCHMARK(BM_MaxTableBuild)
    ->ArgsProduct({{0, 1}, {0, 2}})
    ->ArgNames({"parallel", "q"})
    ->Unit(benchmark::kMillisecond);

void BM_CircleMax(benchmark::State& state) {
  const CanonicalIntegral u =
      CanonicalIntegral::for_order(synthesize_power_zeros(1.0, 0.5, 10000), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(circle_max(u, 1e4, mode(state)));
}
BENCHMARK(BM_CircleMax)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_BoundSweep(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> radius(0.5, 50.0);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::vector<Atom> atoms(40);
  for (Atom& a : atoms) a.point = std::polar(radius(rng), angle(rng));
  const CanonicalIntegral u(DiscreteMeasure(atoms), KernelContext(1));
  u.kernel().warm_up();
  const std::vector<double> radii = GeometricGrid::spanning(0.1, 1000.0, 16).radii();
  for (auto _ : state) benchmark::DoNotOptimize(verify_theorem_12(u, radii, mode(state)));
}
BENCHMARK(BM_BoundSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
