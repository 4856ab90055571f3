#include <benchmark/benchmark.h>

#include <cmath>
#include <numeric>

#include "madd/network.hpp"
#include "madd/rng.hpp"

namespace {

void BM_BuildNetwork(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<madd::AgentProfile> profiles(n);
  madd::Substream rng(3);
  for (std::size_t i = 0; i < n; ++i) {
    profiles[i].agent_id = "a" + std::to_string(i);
    profiles[i].interest = {10.0};
    profiles[i].influence = {std::pow(1.0 - rng.uniform(), -1.0 / 1.6)};
  }
  madd::CommunityIndex idx;
  idx.members.assign(1, std::vector<std::size_t>(n));
  std::iota(idx.members[0].begin(), idx.members[0].end(), 0);
  const madd::SimulationParams params;
  for (auto _ : state) benchmark::DoNotOptimize(madd::build_network(profiles, idx, params, 1));
}
BENCHMARK(BM_BuildNetwork)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
