// Serial reference vs parallel kernels. Pass --benchmark_filter to pick one.

#include "fso/ber_engine.hpp"
#include "fso/montecarlo.hpp"

#include <benchmark/benchmark.h>

namespace {

const fso::ModulationSpec kQam8(fso::Scheme::qam, 8);

void BM_MisoTensorSerial(benchmark::State& state) {
  const auto stat = fso::TurbulenceStat::make(0.3744, static_cast<int>(state.range(0)), 0.3);
  const auto& rule = fso::cached_gauss_hermite_rule(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fso::reference::ber_hop_miso(kQam8, 1e4, 7.317, stat, rule));
  }
}

void BM_MisoTensorParallel(benchmark::State& state) {
  const auto stat = fso::TurbulenceStat::make(0.3744, static_cast<int>(state.range(0)), 0.3);
  const auto& rule = fso::cached_gauss_hermite_rule(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fso::ber_hop_miso(kQam8, 1e4, 7.317, stat, rule));
  }
}

void BM_SisoClosedForm(benchmark::State& state) {
  const auto& rule = fso::cached_gauss_hermite_rule(64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fso::ber_hop_siso(kQam8, 1e4, 7.317, 0.1368, rule));
  }
}

void BM_SemiAnalyticSerial(benchmark::State& state) {
  const auto stat = fso::TurbulenceStat::make(0.3744, static_cast<int>(state.range(0)), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fso::reference::semi_analytic_hop(kQam8, 100.0, 1.0, stat, 1'000'000, 1, fso::QMode::exact));
  }
}

void BM_SemiAnalyticParallel(benchmark::State& state) {
  const auto stat = fso::TurbulenceStat::make(0.3744, static_cast<int>(state.range(0)), 0.3);
  fso::McOptions opt;
  opt.samples = 1'000'000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fso::semi_analytic_hop(kQam8, 100.0, 1.0, stat, opt));
  }
}

}  // namespace

BENCHMARK(BM_MisoTensorSerial)->Args({2, 64})->Args({3, 30})->Args({3, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MisoTensorParallel)->Args({2, 64})->Args({3, 30})->Args({3, 64})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SisoClosedForm);
BENCHMARK(BM_SemiAnalyticSerial)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SemiAnalyticParallel)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
