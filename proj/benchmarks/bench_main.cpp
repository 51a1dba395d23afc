#include <benchmark/benchmark.h>

#include <vector>

#include "ecomp/baselines.hpp"
#include "ecomp/dynamics.hpp"
#include "ecomp/encoders.hpp"
#include "ecomp/generators.hpp"

namespace {

ecomp::PolynomialProgram qp(std::size_t n) {
  ecomp::QpConfig c;
  c.vars = n;
  return ecomp::generate_nonconvex_qp(c, 1);
}

std::vector<double> uniform(std::size_t n, double r) { return std::vector<double>(n, r / n); }

void BM_Evaluate(benchmark::State& state) {
  const auto p = qp(state.range(0));
  const auto v = uniform(p.num_vars(), p.sum_constraint());
  for (auto _ : state) benchmark::DoNotOptimize(ecomp::evaluate(p, v));
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(50)->Arg(200);

void BM_Gradient(benchmark::State& state) {
  const auto p = qp(state.range(0));
  const auto v = uniform(p.num_vars(), p.sum_constraint());
  std::vector<double> g(p.num_vars());
  for (auto _ : state) {
    ecomp::gradient_into(p, v, g);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_Gradient)->Arg(10)->Arg(50)->Arg(200);

void BM_Step(benchmark::State& state) {
  const auto p = qp(state.range(0));
  const auto schedule = ecomp::preset_schedule("schedule4");
  auto s = ecomp::init_state(p, schedule, 0);
  for (auto _ : state) {
    if (s.iteration == schedule.iterations) {
      state.PauseTiming();
      s = ecomp::init_state(p, schedule, s.iteration);
      state.ResumeTiming();
    }
    ecomp::step(p, schedule, s);
  }
}
BENCHMARK(BM_Step)->Arg(10)->Arg(50)->Arg(200);

void BM_SolveSchedule4(benchmark::State& state) {
  const auto p = qp(10);
  const auto schedule = ecomp::preset_schedule("schedule4");
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(ecomp::solve(p, schedule, seed++).best_energy);
}
BENCHMARK(BM_SolveSchedule4)->Unit(benchmark::kMillisecond);

void BM_BruteForceGrid(benchmark::State& state) {
  const auto p = qp(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ecomp::brute_force_grid(p, 0.05, 1).best_energy);
}
BENCHMARK(BM_BruteForceGrid)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_BruteForceCut(benchmark::State& state) {
  const auto g = ecomp::random_graph(state.range(0), 0.5, 0);
  for (auto _ : state) benchmark::DoNotOptimize(ecomp::brute_force_cut(g, 3).value);
}
BENCHMARK(BM_BruteForceCut)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
