#include <benchmark/benchmark.h>

#include <vector>

#include "pvalprior/concordance.hpp"
#include "pvalprior/diagnostics.hpp"
#include "pvalprior/synth.hpp"
#include "pvalprior/ttest.hpp"

namespace {

using namespace pvalprior;

void BM_TwoSidedP(benchmark::State& state) {
  const int df = static_cast<int>(state.range(0));
  double t = 0.0;
  for (auto _ : state) {
    t += 0.001;
    if (t > 20.0) t = 0.0;
    benchmark::DoNotOptimize(t_two_sided_p(t, df));
  }
}
BENCHMARK(BM_TwoSidedP)->Arg(4)->Arg(10)->Arg(100);

Dataset null_dataset(std::size_t genes) {
  const SeededGenerator gen(1);
  return generate_null(synthetic_moments(genes, gen.derive(0)), {2, 3, 0.0}, gen.derive(1));
}

void BM_GenerateNull(benchmark::State& state) {
  const SeededGenerator gen(1);
  const auto moments = synthetic_moments(static_cast<std::size_t>(state.range(0)), gen.derive(0));
  const Parallelism par{static_cast<unsigned>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(generate_null(moments, {2, 3, 0.0}, gen.derive(1), par));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateNull)->Args({20000, 1})->Args({20000, 0})->Unit(benchmark::kMillisecond);

void BM_TestMatrix(benchmark::State& state) {
  const auto data = null_dataset(static_cast<std::size_t>(state.range(0)));
  const Parallelism par{static_cast<unsigned>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(test_matrix(data.matrix, data.design, "G1", "G2", par));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TestMatrix)->Args({20000, 1})->Args({20000, 0})->Unit(benchmark::kMillisecond);

void BM_Diagnose(benchmark::State& state) {
  const auto data = null_dataset(20000);
  const auto p = test_matrix(data.matrix, data.design, "G1", "G2").p_values();
  for (auto _ : state) benchmark::DoNotOptimize(diagnose(p));
}
BENCHMARK(BM_Diagnose)->Unit(benchmark::kMillisecond);

void BM_Spearman(benchmark::State& state) {
  const auto data = null_dataset(20000);
  const auto a = test_matrix(data.matrix, data.design, "G1", "G2").p_values();
  std::vector<double> b(a.rbegin(), a.rend());
  for (auto _ : state) benchmark::DoNotOptimize(spearman_rho(a, b));
}
BENCHMARK(BM_Spearman)->Unit(benchmark::kMillisecond);

void BM_Coincidence(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(coincidence_test(22626, 230, 308, 13));
}
BENCHMARK(BM_Coincidence);

}  // namespace
BENCHMARK_MAIN();
