#include <benchmark/benchmark.h>

#include <vector>

#include "okbim/bie_solver.hpp"
#include "okbim/dynamics.hpp"
#include "okbim/potentials.hpp"
#include "okbim/scenario.hpp"

namespace {

okbim::InterfaceSystem four_ellipses(std::size_t n) {
  okbim::Scenario s = okbim::preset("four_ellipse");
  s.n = n;
  return okbim::build_system(s);
}

// Builds the tabulated single-layer operator for all curves.
void BM_OperatorSetup(benchmark::State& state) {
  const auto nodes = okbim::sample_nodes(four_ellipses(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    okbim::SingleLayerOperator op(nodes);
    benchmark::DoNotOptimize(op.size());
  }
}
BENCHMARK(BM_OperatorSetup)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OperatorApply(benchmark::State& state) {
  const auto nodes = okbim::sample_nodes(four_ellipses(static_cast<std::size_t>(state.range(0))));
  const okbim::SingleLayerOperator op(nodes);
  std::vector<double> density(op.size(), 1.0), out(op.size());
  for (auto _ : state) {
    op.apply(density, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_OperatorApply)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& state) {
  const auto system = four_ellipses(static_cast<std::size_t>(state.range(0)));
  const okbim::FluxPhase phase = okbim::update_flux_phase({}, system);
  for (auto _ : state) benchmark::DoNotOptimize(okbim::solve(system, phase));
}
BENCHMARK(BM_Solve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

// One solve plus one AB2 step, the unit cost of a run.
void BM_Step(benchmark::State& state) {
  okbim::EvolutionState start = okbim::initial_state(four_ellipses(static_cast<std::size_t>(state.range(0))));
  okbim::StepOptions options;
  const auto first = okbim::solve(start.system, start.phase);
  start = okbim::advance(start, first, options, 1e-3);
  for (auto _ : state) {
    const auto sol = okbim::solve(start.system, start.phase, {}, &*start.prev_solution);
    benchmark::DoNotOptimize(okbim::advance(start, sol, options, 1e-3));
  }
}
BENCHMARK(BM_Step)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
