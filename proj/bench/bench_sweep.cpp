#include <benchmark/benchmark.h>

#include <vector>

#include "wifiexp/emission.hpp"
#include "wifiexp/study.hpp"
#include "wifiexp/sweep.hpp"

namespace {

using namespace wifiexp;

struct Fixture {
  emission::EmissionTimeline timeline;
  sweep::SweepConfig config = sweep::SweepConfig::recommended();
  std::vector<double> starts;

  explicit Fixture(double duration)
      : timeline(emission::build_traffic_timeline(
            [&] {
              auto s = emission::ScenarioSpec::preset(emission::ScenarioKind::file2);
              s.measurement_duration = duration;
              return s;
            }(),
            7)) {
    const auto sweeps = static_cast<std::size_t>(duration / config.sweep_period);
    starts = sweep::sweep_schedule(config, 0.0, sweeps, duration, 11);
  }
};

const Fixture& fixture() {
  static const Fixture f(120.0);
  return f;
}

void BM_SerialReference(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep::serial::acquire_run(f.timeline, f.config, f.starts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.starts.size()));
}

void BM_FastKernelSingleThread(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep::acquire_with(sweep::detect_slots, false, f.timeline, f.config,
                                                 f.starts, {}, 20e6));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.starts.size()));
}

void BM_FastKernelOpenMP(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep::acquire_run(f.timeline, f.config, f.starts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.starts.size()));
}

BENCHMARK(BM_SerialReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FastKernelSingleThread)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FastKernelOpenMP)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
