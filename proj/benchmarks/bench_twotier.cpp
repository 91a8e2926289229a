#include <benchmark/benchmark.h>

#include "twotier/equilibrium.hpp"
#include "twotier/montecarlo.hpp"
#include "twotier/pivot.hpp"
#include "twotier/reference_data.hpp"
#include "twotier/welfare.hpp"

using namespace twotier;

namespace {

Rule rule_arg(const benchmark::State& state) {
  return state.range(1) == 0 ? Rule::wta : Rule::pr;
}

void BM_PivotVector(benchmark::State& state) {
  const auto& c = reference::configuration(static_cast<int>(state.range(0))).config;
  const Rule rule = rule_arg(state);
  const StrategyProfile t = solve(c, rule).profile;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pivot_vector(c, rule, t));
  }
}
// Config 1 is the largest electorate (63 voters), 13 has a 7-voter group.
BENCHMARK(BM_PivotVector)->Args({1, 0})->Args({1, 1})->Args({13, 0})->Args({13, 1});

void BM_Solve(benchmark::State& state) {
  const auto& c = reference::configuration(static_cast<int>(state.range(0))).config;
  const Rule rule = rule_arg(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(c, rule));
  }
}
BENCHMARK(BM_Solve)->Args({1, 0})->Args({9, 1})->Args({15, 1})->Unit(benchmark::kMillisecond);

void BM_ExpectedWelfare(benchmark::State& state) {
  const auto& c = reference::configuration(6).config;
  const StrategyProfile t = solve(c, Rule::pr).profile;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_welfare(c, Rule::pr, t));
  }
}
BENCHMARK(BM_ExpectedWelfare);

void BM_Estimate(benchmark::State& state) {
  const auto& c = reference::configuration(9).config;
  const StrategyProfile t = solve(c, Rule::wta).profile;
  SimOptions opts;
  opts.trials = state.range(0);
  opts.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate(c, Rule::wta, t, opts));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Estimate)
    ->Args({1 << 16, 1})
    ->Args({1 << 16, 4})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

void BM_EstimatePivot(benchmark::State& state) {
  const auto& c = reference::configuration(9).config;
  const StrategyProfile t = solve(c, Rule::pr).profile;
  SimOptions opts;
  opts.trials = 1 << 16;
  opts.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_pivot(c, Rule::pr, t, 0, Candidate::a, opts));
  }
  state.SetItemsProcessed(state.iterations() * opts.trials);
}
BENCHMARK(BM_EstimatePivot)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
