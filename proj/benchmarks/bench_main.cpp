#include <benchmark/benchmark.h>

#include <random>

#include "groupoidkit/bgr.hpp"
#include "groupoidkit/boundary.hpp"
#include "groupoidkit/groupoid.hpp"
#include "groupoidkit/invariants.hpp"
#include "groupoidkit/stabilization.hpp"

using namespace groupoidkit;

namespace {

IntegerMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> d(-9, 9);
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
  return m;
}

GraphPtr e2minus() { return share(*builtin_graph("E2minus")); }

void BM_Det(benchmark::State& state) {
  auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(det(m));
}
BENCHMARK(BM_Det)->Arg(5)->Arg(10)->Arg(20);

void BM_Smith(benchmark::State& state) {
  auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_Smith)->Arg(5)->Arg(10)->Arg(20);

void BM_Normalize(benchmark::State& state) {
  auto g = e2minus();
  auto k = parse_clopen(g, "Z(p.q \\ {e12}) + Z(p.e12.r) + Z(w2 \\ {r}) + Z(q.q.q) + Z(w3)");
  for (auto _ : state) benchmark::DoNotOptimize(normalize(k));
}
BENCHMARK(BM_Normalize);

void BM_Compose(benchmark::State& state) {
  auto g = e2minus();
  auto u = parse_bisection(g, "B{ (p | q); (q.e12 | e12); (e12.r | r) }");
  auto v = parse_bisection(g, "B{ (q | p.p); (e12 | q.e12 \\ {e23}); (r | e12.e23.e32) }");
  for (auto _ : state) benchmark::DoNotOptimize(compose(u, v));
}
BENCHMARK(BM_Compose);

void BM_UnitaryStages(benchmark::State& state) {
  auto g = e2minus();
  auto k = parse_clopen(g, "Z(p)");
  for (auto _ : state) {
    auto y = unitary_stages(k, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(y.stage_count());
  }
}
BENCHMARK(BM_UnitaryStages)->Arg(1)->Arg(3)->Arg(5);

void BM_UnitaryCheck(benchmark::State& state) {
  auto g = e2minus();
  auto y = unitary_stages(parse_clopen(g, "Z(p)"), 5);
  for (auto _ : state) benchmark::DoNotOptimize(y.check());
}
BENCHMARK(BM_UnitaryCheck);

void BM_StabilizationRoundTrip(benchmark::State& state) {
  StabilizationIso iso(share(*builtin_graph("E2")), 3);
  for (auto _ : state) benchmark::DoNotOptimize(check_round_trip(iso, 3));
}
BENCHMARK(BM_StabilizationRoundTrip);

}  // namespace

BENCHMARK_MAIN();
