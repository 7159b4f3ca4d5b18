// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "prs/kernels.hpp"

namespace {

namespace k = prs::kernels;

struct Workload {
  std::vector<double> sampling;
  std::vector<double> reference;
  k::McTask task;
};

Workload make_workload(std::int64_t n, std::size_t categories, std::int64_t replications) {
  Workload w;
  w.reference.assign(categories, 1.0 / static_cast<double>(categories));
  w.sampling = w.reference;
  const double shift = 0.2 / static_cast<double>(categories);
  w.sampling.front() -= shift;
  w.sampling.back() += shift;
  w.task = {n, w.sampling, w.reference, replications, 1, 0};
  return w;
}

void BM_RegionsSerial(benchmark::State& state) {
  const auto w = make_workload(state.range(0), static_cast<std::size_t>(state.range(1)), 20000);
  for (auto _ : state) benchmark::DoNotOptimize(k::serial::count_regions(w.task, 0.01, 0.02));
  state.SetItemsProcessed(state.iterations() * w.task.replications);
}

void BM_RegionsParallel(benchmark::State& state) {
  const auto w = make_workload(state.range(0), static_cast<std::size_t>(state.range(1)), 20000);
  for (auto _ : state) benchmark::DoNotOptimize(k::parallel::count_regions(w.task, 0.01, 0.02));
  state.SetItemsProcessed(state.iterations() * w.task.replications);
}

void BM_KsSerial(benchmark::State& state) {
  const auto w = make_workload(state.range(0), static_cast<std::size_t>(state.range(1)), 20000);
  for (auto _ : state) benchmark::DoNotOptimize(k::serial::count_ks_at_least(w.task, 0.05));
  state.SetItemsProcessed(state.iterations() * w.task.replications);
}

void BM_KsParallel(benchmark::State& state) {
  const auto w = make_workload(state.range(0), static_cast<std::size_t>(state.range(1)), 20000);
  for (auto _ : state) benchmark::DoNotOptimize(k::parallel::count_ks_at_least(w.task, 0.05));
  state.SetItemsProcessed(state.iterations() * w.task.replications);
}

void BM_ScaledSerial(benchmark::State& state) {
  const auto w = make_workload(state.range(0), static_cast<std::size_t>(state.range(1)), 20000);
  std::vector<double> t(20000), q(20000);
  for (auto _ : state) {
    k::serial::scaled_statistics(w.task, t, q);
    benchmark::DoNotOptimize(q.data());
  }
  state.SetItemsProcessed(state.iterations() * w.task.replications);
}

void BM_ScaledParallel(benchmark::State& state) {
  const auto w = make_workload(state.range(0), static_cast<std::size_t>(state.range(1)), 20000);
  std::vector<double> t(20000), q(20000);
  for (auto _ : state) {
    k::parallel::scaled_statistics(w.task, t, q);
    benchmark::DoNotOptimize(q.data());
  }
  state.SetItemsProcessed(state.iterations() * w.task.replications);
}

#define PRS_SHAPES \
  ->Args({50, 5})->Args({2000, 10})->Args({10000, 20})->Unit(benchmark::kMillisecond)

BENCHMARK(BM_RegionsSerial) PRS_SHAPES;
BENCHMARK(BM_RegionsParallel) PRS_SHAPES;
BENCHMARK(BM_KsSerial) PRS_SHAPES;
BENCHMARK(BM_KsParallel) PRS_SHAPES;
BENCHMARK(BM_ScaledSerial) PRS_SHAPES;
BENCHMARK(BM_ScaledParallel) PRS_SHAPES;

}  // namespace

BENCHMARK_MAIN();
