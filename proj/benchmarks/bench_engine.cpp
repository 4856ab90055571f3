#include <benchmark/benchmark.h>

#include "madd/engine.hpp"
#include "madd/synthetic_evaluator.hpp"
#include "madd/synthetic_scenario.hpp"

namespace {

void BM_PrepareWorld(benchmark::State& state) {
  const madd::Scenario s = madd::make_synthetic_scenario({});
  for (auto _ : state) {
    madd::SyntheticEvaluator eval(s.params.rng_seed);
    benchmark::DoNotOptimize(madd::prepare_world(s, eval));
  }
}
BENCHMARK(BM_PrepareWorld)->Unit(benchmark::kMillisecond);

// One 72-step run on the reference-sized scenario, control vs early correction.
void BM_RunSimulation(benchmark::State& state) {
  const madd::Scenario s = madd::make_synthetic_scenario({});
  madd::SyntheticEvaluator eval(s.params.rng_seed);
  const madd::World world = madd::prepare_world(s, eval);
  madd::RunOptions opt;
  if (state.range(0) == 1)
    opt.plan = madd::InterventionPlan::make(madd::Stage::early, madd::Strategy::fact_based, s.params);
  for (auto _ : state) benchmark::DoNotOptimize(madd::run_simulation(s, world, eval, opt));
}
BENCHMARK(BM_RunSimulation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
