#include <benchmark/benchmark.h>

#include <cmath>

#include "beamlab/energy.hpp"
#include "beamlab/scaling.hpp"
#include "beamlab/solver.hpp"
#include "beamlab/spectral_grid.hpp"

namespace {

using namespace beamlab;

Field gaussian(const Grid& grid) {
  return Field::sample(grid, [](double x) { return std::exp(-0.25 * x * x); });
}

void BM_Deriv(benchmark::State& state) {
  const Grid grid(20.0, static_cast<std::size_t>(state.range(0)));
  const Field f = gaussian(grid);
  for (auto _ : state) benchmark::DoNotOptimize(deriv(f, 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Deriv)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_Step(benchmark::State& state) {
  const Grid grid(20.0, static_cast<std::size_t>(state.range(0)));
  const PhysicalState s0{0.0, gaussian(grid), Field(grid)};
  NonlinearityModel nonlin;
  nonlin.mu = 1.0;
  IntegratorConfig cfg;
  cfg.scheme = static_cast<Scheme>(state.range(1));
  const CoefficientModel model = CoefficientModel::power_law(0.0, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(step(s0, 1e-2, model, nonlin, cfg));
}
BENCHMARK(BM_Step)->ArgsProduct({{512, 4096}, {static_cast<int>(Scheme::ExpMidpoint), static_cast<int>(Scheme::ExpRK4)}});

void BM_ToScaledAndReport(benchmark::State& state) {
  const CoefficientModel model = CoefficientModel::power_law(0.0, 0.0);
  const double t = 50.0;
  const Grid x_grid(20.0 * std::sqrt(1.0 + t) * 1.05, 2048);
  const PhysicalState st{t, Field::sample(x_grid, [&](double x) { return heat_kernel(1.0 + t, x); }),
                         Field::sample(x_grid, [&](double x) { return 0.01 * x * heat_kernel(1.0 + t, x); })};
  const Grid y_grid(20.0, 512);
  for (auto _ : state) {
    const ScaledState scaled = to_scaled(st, model, y_grid);
    benchmark::DoNotOptimize(evaluate_report(scaled, NonlinearityModel{}, EnergyWeights{}));
  }
}
BENCHMARK(BM_ToScaledAndReport);

}  // namespace

BENCHMARK_MAIN();
