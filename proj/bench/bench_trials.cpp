// Serial versus OpenMP trial batches on a moderate regime instance.
#include <benchmark/benchmark.h>

#include <cmath>

#include "bootperc/experiments.hpp"
#include "bootperc/trial_runner.hpp"

namespace {

constexpr std::size_t kBatch = 16;

const bootperc::Regime& regime() {
  static const bootperc::Regime r = bootperc::Regime::make(20000, std::pow(20000.0, -0.7), 2);
  return r;
}

void BM_TrialsSerial(benchmark::State& state) {
  const auto& reg = regime();
  const std::size_t a = reg.seed_size(0.0);
  for (auto _ : state) {
    auto out = bootperc::run_trials_serial(kBatch, [&](std::size_t i) { return bootperc::run_trial(reg, a, i); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kBatch));
}

void BM_TrialsOpenMP(benchmark::State& state) {
  const auto& reg = regime();
  const std::size_t a = reg.seed_size(0.0);
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto out = bootperc::run_trials(kBatch, workers, [&](std::size_t i) { return bootperc::run_trial(reg, a, i); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kBatch));
}

void BM_SampleGnp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double p = std::pow(static_cast<double>(n), -0.7);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto g = bootperc::sample_gnp({n, p, ++seed});
    benchmark::DoNotOptimize(g.edge_count());
  }
}

}  // namespace

BENCHMARK(BM_TrialsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsOpenMP)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SampleGnp)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
