#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "mjsre/des.hpp"
#include "mjsre/random.hpp"
#include "mjsre/recurrence.hpp"
#include "mjsre/sampling.hpp"
#include "mjsre/scenario.hpp"
#include "mjsre/stability.hpp"

namespace {

mjsre::Scenario two_class(int servers) {
  mjsre::Scenario sc;
  sc.servers = servers;
  sc.classes = {{"big", servers, 1e-3, mjsre::Exponential{40.0}},
                {"small", 1, 1.0 - 1e-3, mjsre::Exponential{1.0}}};
  sc.arrival = {0.2 * mjsre::lambda_ideal(sc), mjsre::InterArrivalFamily::exponential, 1};
  return sc;
}

std::vector<mjsre::JobMark> marks(const mjsre::Scenario& sc, std::int64_t n) {
  std::vector<mjsre::JobMark> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) out.push_back(mjsre::sample_job(sc, {7, 0, static_cast<std::uint64_t>(j)}));
  return out;
}

void BM_Philox(benchmark::State& state) {
  mjsre::KeyedStream stream({1, 0, 0}, mjsre::Substream::service);
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_u64());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);

void BM_SampleJob(benchmark::State& state) {
  const mjsre::Scenario sc = two_class(256);
  std::uint64_t j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mjsre::sample_job(sc, {1, 0, j++}));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleJob);

void BM_WorkloadStep(benchmark::State& state) {
  const auto servers = static_cast<int>(state.range(0));
  const mjsre::Scenario sc = two_class(servers);
  const std::vector<mjsre::JobMark> jobs = marks(sc, 4096);
  mjsre::WorkloadBuffer buf(static_cast<std::size_t>(servers));
  std::size_t i = 0;
  for (auto _ : state) {
    buf.apply(jobs[i]);
    i = (i + 1) & 4095;
    benchmark::DoNotOptimize(buf.values().data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WorkloadStep)->Arg(20)->Arg(256)->Arg(1024);

void BM_PileStep(benchmark::State& state) {
  const auto servers = static_cast<int>(state.range(0));
  const mjsre::Scenario sc = two_class(servers);
  const std::vector<mjsre::JobMark> jobs = marks(sc, 4096);
  mjsre::PileBuffer pile(static_cast<std::size_t>(servers));
  std::size_t i = 0;
  for (auto _ : state) {
    pile.apply(jobs[i].alpha, jobs[i].sigma);
    if ((i & 1023) == 0) pile.renormalize();
    i = (i + 1) & 4095;
    benchmark::DoNotOptimize(pile.sup_norm());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PileStep)->Arg(20)->Arg(256)->Arg(1024);

void BM_RunWindow(benchmark::State& state) {
  const mjsre::Scenario sc = two_class(256);
  const std::int64_t n = state.range(0);
  const mjsre::WorkloadVector zero(std::size_t{256});
  for (auto _ : state) benchmark::DoNotOptimize(mjsre::run_window(sc, {3, 0}, n, 0, zero));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RunWindow)->Arg(10000)->Arg(80000)->Unit(benchmark::kMillisecond);

void BM_BackwardSps(benchmark::State& state) {
  const mjsre::Scenario sc = two_class(256);
  std::uint64_t replica = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mjsre::backward_sps(sc, {5, replica++}));
}
BENCHMARK(BM_BackwardSps)->Unit(benchmark::kMillisecond);

void BM_Des(benchmark::State& state) {
  const mjsre::Scenario sc = two_class(static_cast<int>(state.range(0)));
  const std::int64_t n = 100000;
  for (auto _ : state) benchmark::DoNotOptimize(mjsre::des_run(sc, {9, 0}, n));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Des)->Arg(20)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_StabilityMilestone(benchmark::State& state) {
  const mjsre::Scenario sc = two_class(256);
  mjsre::StabilityOptions o;
  o.ell0 = state.range(0);
  o.ell_max = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(mjsre::estimate_gamma(sc, {11, 0}, o));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StabilityMilestone)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
