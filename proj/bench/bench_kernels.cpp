// Serial reference kernels against their OpenMP counterparts on the
// six-dimensional product and on the flux 3-form.

#include <benchmark/benchmark.h>

#include "epscontact/sugra6.hpp"

using namespace epc;

namespace {

const SupergravityConfig& config() {
  static const SupergravityConfig cfg = [] {
    const auto n = catalog("sl2-lor"), x = catalog("su2");
    return build_solution(n.structure, x.structure, Scalar::param("lam"));
  }();
  return cfg;
}

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel" : "serial"); }

void BM_LeviCivita(benchmark::State& state) {
  const auto& m = config().manifold;
  for (auto _ : state) benchmark::DoNotOptimize(levi_civita(m, exec_of(state)));
  label(state);
}

void BM_Riemann(benchmark::State& state) {
  const Connection lc = levi_civita(config().manifold);
  for (auto _ : state) benchmark::DoNotOptimize(riemann(lc, exec_of(state)));
  label(state);
}

void BM_RiemannReference(benchmark::State& state) {
  const Connection lc = levi_civita(config().manifold);
  for (auto _ : state) benchmark::DoNotOptimize(riemann_reference(lc));
}

void BM_RiemannSkewTorsion(benchmark::State& state) {
  const Connection c = with_skew_torsion(config().manifold, config().h);
  for (auto _ : state) benchmark::DoNotOptimize(riemann(c, exec_of(state)));
  label(state);
}

void BM_Hodge(benchmark::State& state) {
  const auto& h = config().h;
  for (auto _ : state) benchmark::DoNotOptimize(hodge(h, exec_of(state)));
  label(state);
}

void BM_ExteriorDerivative(benchmark::State& state) {
  const auto star = hodge(config().h);
  for (auto _ : state) benchmark::DoNotOptimize(ext_d(star, exec_of(state)));
  label(state);
}

void BM_VerifyEom(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_eom(config(), exec_of(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_LeviCivita)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Riemann)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RiemannReference)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RiemannSkewTorsion)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Hodge)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExteriorDerivative)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VerifyEom)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
