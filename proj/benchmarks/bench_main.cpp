#include <benchmark/benchmark.h>

#include <vector>

#include "dualstop/dual_objective.hpp"
#include "dualstop/martingale.hpp"
#include "dualstop/presets.hpp"
#include "dualstop/sieve_basis.hpp"

using namespace dualstop;

namespace {

PathModel table1_model(std::size_t steps) {
  RunSpec spec = preset_spec("table1");
  spec.n_disc = steps;
  return spec.problem(SpotRow{{100.0}, {}}).path_model();
}

void BM_FeatureEvaluation(benchmark::State& state) {
  const RunSpec spec = preset_spec("table3");
  const BasisSpec basis = spec.problem(spec.rows.front()).basis;
  FeatureMap map(basis);
  std::vector<double> out(basis.feature_count());
  const std::vector<double> x{92.0, 87.5};
  for (auto _ : state) {
    map.evaluate(1.25, x, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_FeatureEvaluation);

void BM_PathSimulation(benchmark::State& state) {
  const PathModel pm = table1_model(200);
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto paths = MaterializedPaths::simulate(pm, count, NoiseKey{1, 0});
    benchmark::DoNotOptimize(paths.payoffs().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PathSimulation)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_ObjectiveEvaluation(benchmark::State& state) {
  const PathModel pm = table1_model(200);
  const auto paths = MaterializedPaths::simulate(pm, 10'000, NoiseKey{1, 0});
  const auto w = quadrature_weights(pm.payoff, pm.grid, pm.observation);
  const DualObjective f(paths, w, 2.0);
  const std::vector<double> beta(f.dimension(), 0.1);
  for (auto _ : state) {
    auto v = f.evaluate(beta, 100.0, state.range(0) != 0);
    benchmark::DoNotOptimize(v.value);
  }
}
BENCHMARK(BM_ObjectiveEvaluation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
