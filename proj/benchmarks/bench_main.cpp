#include <benchmark/benchmark.h>

#include <vector>

#include "hanklab/combinat.hpp"
#include "hanklab/ensemble.hpp"
#include "hanklab/mc.hpp"
#include "hanklab/oracle.hpp"
#include "hanklab/spectra.hpp"

using namespace hanklab;

namespace {

SymmetricBandMatrix sample_A(int n) {
  const auto config = BandConfig::with_rule(n, kDefaultBandwidthExponent);
  const double grid[] = {1.0};
  const auto paths = sample_symbol_paths(EntryModel{}, config, grid, 1);
  return scale_to_A(build_band_hankel(paths, 0, config), config);
}

void BM_TraceEigen(benchmark::State& state) {
  const auto a = sample_A(static_cast<int>(state.range(0)));
  const std::vector<int> ps{2, 4};
  for (auto _ : state) benchmark::DoNotOptimize(trace_powers(a, ps, TraceMethod::eigen));
}
BENCHMARK(BM_TraceEigen)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_TraceMatmul(benchmark::State& state) {
  const auto a = sample_A(static_cast<int>(state.range(0)));
  const std::vector<int> ps{2, 4};
  for (auto _ : state) benchmark::DoNotOptimize(trace_powers(a, ps, TraceMethod::matmul));
}
BENCHMARK(BM_TraceMatmul)->Arg(128)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_TraceFormula(benchmark::State& state) {
  const auto config = BandConfig::with_bandwidth(8, 3);
  const double grid[] = {1.0};
  const auto paths = sample_symbol_paths(EntryModel{}, config, grid, 2);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_power_formula(paths, 0, config, p));
}
BENCHMARK(BM_TraceFormula)->DenseRange(2, 5);

void BM_OracleCovP2(benchmark::State& state) {
  const auto config = BandConfig::with_rule(static_cast<int>(state.range(0)), kDefaultBandwidthExponent);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::exact_cov_w(config, 2, 2, 1.0, 1.0));
}
BENCHMARK(BM_OracleCovP2)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OracleCovP4(benchmark::State& state) {
  const auto config = BandConfig::with_bandwidth(32, 6);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::exact_cov_w(config, 4, 4, 1.0, 1.0));
}
BENCHMARK(BM_OracleCovP4)->Unit(benchmark::kMillisecond);

void BM_ClassCounts(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(combinat::class_counts(p, p));
}
BENCHMARK(BM_ClassCounts)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_RunExperiment(benchmark::State& state) {
  mc::ExperimentPlan plan;
  plan.config = BandConfig::with_rule(static_cast<int>(state.range(0)), kDefaultBandwidthExponent);
  plan.p_list = {2, 4};
  plan.replicates = 50;
  plan.trace_method = TraceMethod::matmul;
  plan.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mc::run_experiment(plan));
}
BENCHMARK(BM_RunExperiment)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
