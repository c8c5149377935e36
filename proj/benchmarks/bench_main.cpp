#include <benchmark/benchmark.h>

#include "subdelay/arms.hpp"
#include "subdelay/bandit.hpp"
#include "subdelay/delay.hpp"
#include "subdelay/env.hpp"
#include "subdelay/feedback.hpp"
#include "subdelay/rng.hpp"
#include "subdelay/simulation.hpp"

namespace {

using namespace subdelay;

Environment benchmark_f1() {
  Rng rng(7);
  return LinearEnv::draw(20, 4, 0.1, 0.9, rng);
}

DelayModel delay_for(int idx) {
  static const char* names[] = {"D1", "D2", "D3", "D4", "D5", "D6"};
  return DelayModel::from_name(names[idx]);
}

void BM_EtcgSimulation(benchmark::State& state) {
  const auto env = benchmark_f1();
  const auto delay = delay_for(static_cast<int>(state.range(0)));
  const auto horizon = static_cast<std::uint64_t>(state.range(1));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    EtcgAgent agent(env.ground(), 4, horizon);
    Rng rng(seed++);
    auto result = simulate(agent, env, delay, horizon, rng);
    benchmark::DoNotOptimize(result.actions.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_EtcgSimulation)
    ->ArgsProduct({{0, 1, 2, 5}, {10'000}})
    ->Unit(benchmark::kMillisecond);

void BM_NaiveUcbStep(benchmark::State& state) {
  const auto env = benchmark_f1();
  const auto delay = DelayModel::no_delay();
  for (auto _ : state) {
    NaiveUcbAgent agent(env.ground(), 4, 6000);
    Rng rng(3);
    auto result = simulate(agent, env, delay, 6000, rng);
    benchmark::DoNotOptimize(result.actions.data());
  }
}
BENCHMARK(BM_NaiveUcbStep)->Unit(benchmark::kMillisecond);

void BM_DepositAdvance(benchmark::State& state) {
  const auto pmf = DelayPmf::geometric(static_cast<double>(state.range(0)) / 10.0);
  PendingBuffer buffer;
  for (auto _ : state) {
    buffer.deposit(0.5, pmf);
    benchmark::DoNotOptimize(buffer.advance());
  }
  state.counters["support"] = static_cast<double>(pmf.support());
}
BENCHMARK(BM_DepositAdvance)->DenseRange(5, 9, 2);

void BM_BruteForceOptimum(benchmark::State& state) {
  const auto env = Environment(WeightCoverEnv::blocks({6, 6, 6, 2}, 4));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimum(env, 4));
}
BENCHMARK(BM_BruteForceOptimum)->Unit(benchmark::kMicrosecond);

void BM_UpperTailBound(benchmark::State& state) {
  Rng rng(11);
  std::vector<DelayPmf> family;
  for (int i = 0; i < state.range(0); ++i) family.push_back(DelayPmf::geometric(rng.uniform(0.5, 0.9)));
  for (auto _ : state) benchmark::DoNotOptimize(build_upper_tail_bound(family));
}
BENCHMARK(BM_UpperTailBound)->RangeMultiplier(4)->Range(4, 256);

}  // namespace

BENCHMARK_MAIN();
