// SPDX-License-Identifier: Apache-2.0
//
// Serial reference kernels against their OpenMP counterparts. Arg 0 runs Execution::serial,
// arg 1 Execution::parallel.
#include <benchmark/benchmark.h>

#include "hstokes/field.hpp"
#include "hstokes/parabolic_div.hpp"
#include "hstokes/sampling.hpp"
#include "hstokes/stokes_halfspace.hpp"
#include "hstokes/symbol_sweep.hpp"

using namespace hstokes;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_verify_symbols(benchmark::State& state) {
  const auto modes = sample_modes({}, 2000, 1);
  const SymbolSweepTolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(verify_symbols(modes, tol, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(modes.size()));
  label(state);
}

void BM_verify_trace_relations(benchmark::State& state) {
  const auto modes = sample_modes({}, 300, 2);
  const QuadratureCfg cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_trace_relations(modes, 1, TraceRelation::T11, cfg, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(modes.size()));
  label(state);
}

void BM_synthesize_field(benchmark::State& state) {
  TensorGrid grid;
  grid.n = 2;
  grid.nx = {64};
  grid.y = YGrid::graded(257, 40.0, 1.02);
  const FluidConstants constants{1.0, 1.0, 1.0};
  std::vector<FieldTerm> terms;
  for (int m = 1; m <= 8; ++m) {
    const ModeProfile p = solve_mode(derive_mode(constants, 0.0, {static_cast<double>(m)}), BcSpec(1, 1), 1.0);
    terms.push_back({p, 1.0});
    terms.push_back({p.conj(), 1.0});
  }
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_field(terms, grid, 0.0, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
  label(state);
}

}  // namespace

BENCHMARK(BM_verify_symbols)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_verify_trace_relations)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_synthesize_field)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
