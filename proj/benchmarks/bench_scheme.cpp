#include <benchmark/benchmark.h>

#include "lagns/diagnostics.hpp"
#include "lagns/integrate.hpp"
#include "lagns/scheme.hpp"
#include "lagns/verification.hpp"

using namespace lagns;

namespace {

struct Fixture {
  StepContext ctx;
  FluidState state;

  explicit Fixture(long long n)
      : ctx{make_grid({SetupKind::Cauchy}, 100.0, n), GasParams{}, {SetupKind::Cauchy}, {}, {}} {
    InitialDataSpec spec;
    spec.amplitude_v = 2.0;
    spec.amplitude_u = 0.5;
    spec.amplitude_theta = -0.8;
    state = build_initial_data(spec, ctx.setup, ctx.grid);
  }
};

void BM_Rhs(benchmark::State& st) {
  const Fixture f(st.range(0));
  StateDerivative out;
  for (auto _ : st) {
    rhs_into(f.state, f.ctx.grid, f.ctx.params, f.ctx.setup, nullptr, out);
    benchmark::DoNotOptimize(out.du.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Rhs)->RangeMultiplier(4)->Range(256, 16384);

void BM_Step(benchmark::State& st) {
  const Fixture f(st.range(0));
  const double dt = stable_dt(f.state, f.ctx.grid, f.ctx.params, f.ctx.control);
  for (auto _ : st) {
    StepResult r = step(f.state, dt, f.ctx);
    benchmark::DoNotOptimize(r.state.v.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Step)->RangeMultiplier(4)->Range(256, 16384);

void BM_AuditRecord(benchmark::State& st) {
  Fixture f(st.range(0));
  Auditor a(f.ctx.params, f.ctx.grid);
  for (auto _ : st) {
    f.state.t += 1.0;
    benchmark::DoNotOptimize(a.record(f.state).E);
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_AuditRecord)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
