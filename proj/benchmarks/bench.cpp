#include <benchmark/benchmark.h>

#include "cdo/cech.hpp"
#include "cdo/dolbeault.hpp"
#include "cdo/genus.hpp"
#include "cdo/parse.hpp"
#include "cdo/voa.hpp"

using namespace cdo;

static void eta_power_bm(benchmark::State& st) {
  int order = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(eta_power(24, order));
}
BENCHMARK(eta_power_bm)->Arg(20)->Arg(100)->Arg(400);

static void witten_genus_bm(benchmark::State& st) {
  int d = static_cast<int>(st.range(0));
  ChernData c;
  c.d = d;
  for (auto& p : partitions(d)) c.numbers[p] = Q(static_cast<long>(p.size()) * 3 - 1);
  for (auto _ : st) benchmark::DoNotOptimize(witten_genus(c, 10));
}
BENCHMARK(witten_genus_bm)->DenseRange(1, 4);

static void axioms_bm(benchmark::State& st) {
  int d = static_cast<int>(st.range(0));
  RandomSpec spec;
  spec.degree = 3;
  auto va = VertexAlgebroid::cdo(d);
  for (auto _ : st) benchmark::DoNotOptimize(axioms_check(va, 20, 1, spec));
}
BENCHMARK(axioms_bm)->DenseRange(1, 3);

static void central_charge_bm(benchmark::State& st) {
  BetaGamma bg(static_cast<int>(st.range(0)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(bg.nth_product(bg.nu(), 3, bg.nu()));
}
BENCHMARK(central_charge_bm)->DenseRange(1, 3);

static void homotopy_dg_bm(benchmark::State& st) {
  Nerve N = shear_nerve(3);
  for (auto _ : st) benchmark::DoNotOptimize(homotopy_dg_check(N, 1, 3));
}
BENCHMARK(homotopy_dg_bm)->Unit(benchmark::kMillisecond);

static void staircase_bm(benchmark::State& st) {
  Nerve N = shear_nerve(3);
  MatForm h = MatForm::functions({{SmoothPoly(1), parse_poly("B1*b2")}, {SmoothPoly(0), SmoothPoly(1)}});
  auto G = propagate_gamma(N, chern_type_connection(h));
  for (auto _ : st) benchmark::DoNotOptimize(staircase_check(N, G));
}
BENCHMARK(staircase_bm)->Unit(benchmark::kMillisecond);

static void square_zero_bm(benchmark::State& st) {
  MatForm h = MatForm::functions({{SmoothPoly(1), parse_poly("B1*b2")}, {SmoothPoly(0), SmoothPoly(1)}});
  LocalModel m{chern_type_connection(h), parse_form("B1*db1*db2")};
  for (auto _ : st) benchmark::DoNotOptimize(square_zero_check(m, 4, 5));
}
BENCHMARK(square_zero_bm)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
