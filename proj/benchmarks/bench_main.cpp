#include <benchmark/benchmark.h>

#include "pfkit/zero_count.hpp"

using namespace pfkit;

static void BM_ScalarMul(benchmark::State& st) {
  ExactScalar a = ExactScalar::parse("25/84*sqrt(2) + 3/7*sqrt(5) - 1/3");
  ExactScalar b = ExactScalar::parse("-17/5*sqrt(10) + 2");
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_ScalarMul);

static void BM_PicardFuchs(benchmark::State& st) {
  Hamiltonian H = Hamiltonian::quintic();
  for (auto _ : st) benchmark::DoNotOptimize(inhomogeneous_system(H, SeparationLine::half_pi(1)));
}
BENCHMARK(BM_PicardFuchs)->Unit(benchmark::kMicrosecond);

// fresh context each time: no memo reuse
static void BM_ReduceClosed(benchmark::State& st) {
  Hamiltonian H = Hamiltonian::quintic();
  const int j = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(reduce_closed(H, 4, j));
}
BENCHMARK(BM_ReduceClosed)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMicrosecond);

static void BM_IntersectionSeries(benchmark::State& st) {
  Hamiltonian H = Hamiltonian::quintic();
  for (auto _ : st)
    benchmark::DoNotOptimize(intersection_series(H, SeparationLine::pi(), 0, Endpoint::start, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_IntersectionSeries)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_ClosedExpansion(benchmark::State& st) {
  Hamiltonian H = Hamiltonian::quintic();
  closed_expansion(H, 0, Frac(3));  // constants cached outside the loop
  for (auto _ : st) benchmark::DoNotOptimize(closed_expansion(H, 0, Frac(st.range(0))));
}
BENCHMARK(BM_ClosedExpansion)->Arg(3)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_OracleIntegral(benchmark::State& st) {
  QuadratureConfig cfg;
  cfg.precision = static_cast<int>(st.range(0));
  Oracle o(Hamiltonian::quintic(), SeparationLine::pi(), cfg);
  Real h("-0.02");
  for (auto _ : st) benchmark::DoNotOptimize(o.integral(Region::closed, 1, 1, h));
}
BENCHMARK(BM_OracleIntegral)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_FirstOrderBound(benchmark::State& st) {
  Hamiltonian H = Hamiltonian::quintic();
  IntegralExpr m1 =
      ReductionContext(H).normalize(raw_closed_melnikov(H, PlanarPoly::generic("a", 4, "1"), PlanarPoly::generic("b", 4, "1")));
  ExpansionBundle b = expansion_bundle(H, SeparationLine::pi(), 0, Frac(2));
  auto ps = m1.parameters();
  CoefficientLadder L = build_ladder(melnikov_expansion(m1, b), {ps.begin(), ps.end()});
  RankOptions opt;
  opt.constants = b.constants;
  for (auto _ : st) benchmark::DoNotOptimize(max_zero_bound(L, opt));
}
BENCHMARK(BM_FirstOrderBound)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
