#include <benchmark/benchmark.h>

#include "sflopt/event_sim.hpp"
#include "sflopt/optimizer.hpp"
#include "sflopt/power.hpp"
#include "sflopt/scenario.hpp"
#include "sflopt/subchannel.hpp"

namespace {

void BM_OptimizeBcd(benchmark::State& state) {
  const auto s = sflopt::default_scenario(1);
  for (auto _ : state) {
    auto result = sflopt::optimize_bcd(s, 1e-3, 50);
    benchmark::DoNotOptimize(result.objective_s);
  }
}
BENCHMARK(BM_OptimizeBcd);

void BM_SolvePower(benchmark::State& state) {
  const auto s = sflopt::default_scenario(1);
  const auto w = sflopt::workloads(s.model, sflopt::SplitDecision{6}, 4);
  const double q_main = s.server.power_cap_main_w / 500e3;
  const double q_fed = s.server.power_cap_fed_w / 500e3;
  const auto alloc = sflopt::allocate_greedy(s, sflopt::SplitDecision{6}, 4,
                                             std::vector<double>(20, q_main),
                                             std::vector<double>(20, q_fed));
  for (auto _ : state) {
    auto sol = sflopt::solve_power(s, alloc.assignment, w, 50, 5);
    benchmark::DoNotOptimize(sol.objective_s);
  }
}
BENCHMARK(BM_SolvePower);

void BM_SimulateTimeline(benchmark::State& state) {
  const auto s = sflopt::default_scenario(1);
  const auto d = sflopt::optimize_bcd(s, 1e-3, 10).decision;
  for (auto _ : state) {
    auto t = sflopt::simulate_timeline(s, d);
    benchmark::DoNotOptimize(t.total_s);
  }
}
BENCHMARK(BM_SimulateTimeline);

void BM_AllocateGreedy(benchmark::State& state) {
  const auto s = sflopt::default_scenario(1);
  const std::vector<double> psd_main(20, s.server.power_cap_main_w / 500e3);
  const std::vector<double> psd_fed(20, s.server.power_cap_fed_w / 500e3);
  for (auto _ : state) {
    auto a = sflopt::allocate_greedy(s, sflopt::SplitDecision{6}, 4, psd_main, psd_fed);
    benchmark::DoNotOptimize(a.assignment.owner_main.data());
  }
}
BENCHMARK(BM_AllocateGreedy);

}  // namespace

BENCHMARK_MAIN();
