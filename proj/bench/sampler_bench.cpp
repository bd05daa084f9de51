// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "arboreal/campaigns.hpp"
#include "arboreal/enumeration.hpp"
#include "arboreal/samplers.hpp"

namespace {

using namespace arboreal;

const SamplerSpec kWindow{TreeShape::window(2, 20), 0.75, 1234, 1};

void BM_SampleWindowSerial(benchmark::State& state) {
  const auto table = kernel_table_for(kWindow);
  for (auto _ : state) benchmark::DoNotOptimize(sample_states_serial(kWindow.shape, table, 1234));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kWindow.shape.edge_count()));
}
BENCHMARK(BM_SampleWindowSerial)->Unit(benchmark::kMillisecond);

void BM_SampleWindowParallel(benchmark::State& state) {
  const auto table = kernel_table_for(kWindow);
  for (auto _ : state) benchmark::DoNotOptimize(sample_states(kWindow.shape, table, 1234));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kWindow.shape.edge_count()));
}
BENCHMARK(BM_SampleWindowParallel)->Unit(benchmark::kMillisecond);

void BM_CountForestsSerial(benchmark::State& state) {
  const TreeShape shape = TreeShape::wired_tree(2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(count_forests_serial(shape));
}
BENCHMARK(BM_CountForestsSerial)->Unit(benchmark::kMillisecond);

void BM_CountForestsParallel(benchmark::State& state) {
  const TreeShape shape = TreeShape::wired_tree(2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(count_forests(shape));
}
BENCHMARK(BM_CountForestsParallel)->Unit(benchmark::kMillisecond);

void BM_ClusterStream(benchmark::State& state) {
  const SamplerSpec spec{TreeShape::window(2, 16), 0.75, 7, 64};
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_cluster_stream(spec, 50, 4, workers));
}
BENCHMARK(BM_ClusterStream)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
