#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "madd/power_law.hpp"
#include "madd/rng.hpp"

namespace {

// Continuous Pareto draws rounded down; close enough for timing the fit.
std::vector<std::int64_t> pareto_samples(std::size_t n) {
  madd::Substream rng(17);
  std::vector<std::int64_t> out(n);
  for (auto& x : out) x = static_cast<std::int64_t>(5.0 * std::pow(1.0 - rng.uniform(), -1.0 / 0.8));
  return out;
}

void BM_FitTruncatedPowerLaw(benchmark::State& state) {
  const auto samples = pareto_samples(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(madd::fit_truncated_power_law(samples));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitTruncatedPowerLaw)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_PowerLawCdf(benchmark::State& state) {
  const madd::TruncatedPowerLaw law(1.146, 0.006, 16);
  double x = 16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(law.cdf(x));
    x = x > 5000 ? 16 : x + 7;
  }
}
BENCHMARK(BM_PowerLawCdf);

}  // namespace
