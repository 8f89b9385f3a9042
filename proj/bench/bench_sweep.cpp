#include <benchmark/benchmark.h>

#include <numeric>

#include "wban/batch.hpp"

namespace {

// Eight on-body nodes with mixed periodic traffic plus one emergency node.
wban::Scenario bench_scenario() {
  wban::Scenario s;
  s.horizon = 120 * wban::kUsPerSecond;
  const wban::TrafficClass classes[] = {wban::TrafficClass::NormalHigh, wban::TrafficClass::NormalMedium,
                                        wban::TrafficClass::NormalLow, wban::TrafficClass::Emergency};
  for (wban::NodeId id = 1; id <= 8; ++id) {
    wban::NodeConfig n;
    n.profile.id = id;
    n.profile.placement = wban::Placement::on_body({0.1 * id, 0.2, 0.0});
    n.profile.traffic_class = classes[id % 4];
    n.profile.criticality =
        n.profile.traffic_class == wban::TrafficClass::Emergency ? wban::Criticality::Critical : wban::Criticality::NonCritical;
    n.traffic.traffic_class = n.profile.traffic_class;
    n.traffic.process = wban::ArrivalProcess::Poisson;
    n.traffic.rate_per_hour = 600;
    s.nodes.push_back(n);
  }
  return s;
}

std::vector<std::uint64_t> seeds(std::int64_t n) {
  std::vector<std::uint64_t> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  return v;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto sc = bench_scenario();
  const auto sd = seeds(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wban::run_sweep_serial(sc, sd));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto sc = bench_scenario();
  const auto sd = seeds(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wban::run_sweep_parallel(sc, sd));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
