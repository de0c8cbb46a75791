// Parallel kernels against their serial reference versions on the default
// 99-node network.
#include <benchmark/benchmark.h>

#include "mobgen/config.hpp"
#include "mobgen/reference.hpp"

using namespace mobgen;

namespace {

struct Fixture {
  RunConfig config = paper_default_config();
  BaseGraph grid = build_grid(config.grid);
  OverlayNetwork overlay = build_overlay(grid, config.overlay);
  TransitionKernel kernel{grid, overlay, config.kernel, config.clock};
  std::vector<TransitionMatrix> day = kernel.build_day();
  PopulationVector p_star = fixed_point(compose_day(day)).p;
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

SimConfig sim(std::int64_t k) {
  SimConfig s = fixture().config.sim;
  s.pep_count = static_cast<std::uint64_t>(k);
  s.window = *fixture().config.verify_window;
  return s;
}

void BM_BuildDay(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fixture().kernel.build_day());
}

void BM_BuildDayReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::build_day(fixture().kernel));
}

void BM_ComposeDay(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(compose_day(fixture().day));
}

void BM_ComposeDayReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::compose(fixture().day, fixture().grid.size()));
}

void BM_Multiply(benchmark::State& state) {
  const auto& m = fixture().day[18].entries;
  for (auto _ : state) benchmark::DoNotOptimize(multiply(m, m));
}

void BM_MultiplyReference(benchmark::State& state) {
  const auto& m = fixture().day[18].entries;
  for (auto _ : state) benchmark::DoNotOptimize(reference::multiply(m, m));
}

void BM_Realize(benchmark::State& state) {
  const Fixture& f = fixture();
  const SimConfig s = sim(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(realize_all(s, f.day, f.p_star, f.grid, f.config.clock));
  state.SetItemsProcessed(state.iterations() * state.range(0) * s.window.steps());
}

void BM_RealizeReference(benchmark::State& state) {
  const Fixture& f = fixture();
  const SimConfig s = sim(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::realize(s, f.day, f.p_star, f.grid, f.config.clock));
  state.SetItemsProcessed(state.iterations() * state.range(0) * s.window.steps());
}

struct MetricInputs {
  EmpiricalResult emp;
  DenseMatrix prod;
};

const MetricInputs& metric_inputs() {
  static const MetricInputs in = [] {
    const Fixture& f = fixture();
    const SimConfig s = sim(120000);
    return MetricInputs{empirical_matrix(realize_all(s, f.day, f.p_star, f.grid, f.config.clock), s.window,
                                         f.grid.size()),
                        compose_window(f.day, s.window)};
  }();
  return in;
}

void BM_Metrics(benchmark::State& state) {
  const auto& in = metric_inputs();
  for (auto _ : state) benchmark::DoNotOptimize(metrics(in.emp.a_pep, in.prod, in.emp.origin_mass));
}

void BM_MetricsReference(benchmark::State& state) {
  const auto& in = metric_inputs();
  for (auto _ : state) benchmark::DoNotOptimize(reference::metrics(in.emp.a_pep, in.prod, in.emp.origin_mass));
}

}  // namespace

BENCHMARK(BM_BuildDay)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildDayReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComposeDay)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComposeDayReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Multiply)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MultiplyReference)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Realize)->Arg(120000)->Arg(480000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RealizeReference)->Arg(120000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Metrics)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MetricsReference)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
