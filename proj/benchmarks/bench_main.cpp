#include <benchmark/benchmark.h>

#include "interprisk/ebm.hpp"
#include "interprisk/metrics.hpp"
#include "interprisk/smoothing.hpp"
#include "interprisk/synth.hpp"
#include "interprisk/trees.hpp"

using namespace interprisk;

namespace {

const Dataset& data() {
  static const Dataset d = [] {
    auto cfg = default_synth_config();
    cfg.first_year = cfg.last_year = 2014;
    cfg.n_per_year = 50'000;
    return synthesize(cfg).data;
  }();
  return d;
}

void BM_Auc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<double> s(n);
  std::vector<std::uint8_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = rng.uniform();
    y[i] = rng.uniform() < 0.2;
  }
  for (auto _ : state) benchmark::DoNotOptimize(auc(s, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Auc)->Arg(10'000)->Arg(300'000);

void BM_Binning(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bin_features(data(), 256));
}
BENCHMARK(BM_Binning)->Unit(benchmark::kMillisecond);

void BM_EbmRounds(benchmark::State& state) {
  const auto binned = bin_features(data(), 256);
  EbmHyperparams hp;
  hp.outer_bags = 1;
  hp.interactions = 0;
  hp.max_rounds = static_cast<int>(state.range(0));
  hp.early_stop_patience = hp.max_rounds;
  for (auto _ : state) benchmark::DoNotOptimize(train_ebm(binned, hp));
}
BENCHMARK(BM_EbmRounds)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_GbdtTrees(benchmark::State& state) {
  const auto binned = bin_features(data(), 256);
  GbdtParams p;
  p.n_estimators = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train_gbdt(binned, p));
}
BENCHMARK(BM_GbdtTrees)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SmoothingSpline(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  std::vector<double> x(n), y(n), w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i) / static_cast<double>(n);
    y[i] = rng.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(smoothing_spline(x, y, w, 1e-4));
}
BENCHMARK(BM_SmoothingSpline)->Arg(256)->Arg(4096);

}  // namespace
BENCHMARK_MAIN();
