#include <random>

#include <benchmark/benchmark.h>

#include "coevent/coevents.hpp"
#include "coevent/composition.hpp"
#include "coevent/measure_analysis.hpp"
#include "coevent/scenarios.hpp"

using namespace coevent;

namespace {

// W^dagger W with small integer entries, normalized to unit total sum.
DecoherenceFunctional random_df(std::size_t n, std::size_t rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Complex values[] = {0.0, 1.0, -1.0, 2.0, -2.0, {0.0, 1.0}, {0.0, -1.0}};
  std::uniform_int_distribution<int> pick(0, 6);
  ComplexMatrix d;
  do {
    ComplexMatrix w(static_cast<Eigen::Index>(rank), static_cast<Eigen::Index>(n));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = values[pick(rng)];
    d = w.adjoint() * w;
  } while (d.sum().real() < 1e-6);
  d /= d.sum().real();
  return DecoherenceFunctional::from_matrix(d);
}

void BM_ZeroSets(benchmark::State& state) {
  const auto df = random_df(static_cast<std::size_t>(state.range(0)), 1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(find_zero_sets(df).zero_event_count());
}
BENCHMARK(BM_ZeroSets)->DenseRange(4, 16, 4);

void BM_PrimitiveCoevents(benchmark::State& state) {
  const auto df = random_df(static_cast<std::size_t>(state.range(0)), 1, 11);
  const ZeroSetCatalog cat = find_zero_sets(df);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_primitive_coevents(df, cat).size());
}
BENCHMARK(BM_PrimitiveCoevents)->DenseRange(4, 16, 4);

void BM_ScenarioPbrV2(benchmark::State& state) {
  const auto spec = build_scenario("pbr-v2");
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(spec).candidates.size());
}
BENCHMARK(BM_ScenarioPbrV2);

void BM_CompositionSquare(benchmark::State& state) {
  const auto df = random_df(static_cast<std::size_t>(state.range(0)), 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(composition_anomalies(df, df).emergent_zero.size());
}
BENCHMARK(BM_CompositionSquare)->Arg(2)->Arg(3)->Arg(4);

void BM_Sweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(theta_sweep(0.1, 1.4, static_cast<std::size_t>(state.range(0))).points.size());
}
BENCHMARK(BM_Sweep)->Arg(27)->Arg(271);

}  // namespace

BENCHMARK_MAIN();
