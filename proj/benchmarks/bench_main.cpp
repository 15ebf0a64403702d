// Timings for the dot products, the 2x2 kernel and whole solves.
#include <benchmark/benchmark.h>

#include "hzgsvd/blocked.hpp"
#include "hzgsvd/dotprod.hpp"
#include "hzgsvd/harness.hpp"
#include "hzgsvd/kernel2x2.hpp"

using namespace hzg;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

void BM_DotOrdinary(benchmark::State& st) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_vec(rng, n), b = random_vec(rng, n);
  for (auto _ : st) benchmark::DoNotOptimize(dot_ordinary({a, {}}, {b, {}}));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_DotOrdinary)->Arg(64)->Arg(1024)->Arg(16384);

void BM_DotCompensated(benchmark::State& st) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_vec(rng, n), b = random_vec(rng, n);
  for (auto _ : st) benchmark::DoNotOptimize(dot_compensated({a, {}}, {b, {}}).value());
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_DotCompensated)->Arg(64)->Arg(1024)->Arg(16384);

void BM_Kernel(benchmark::State& st) {
  const bool cx = st.range(0) != 0;
  Rng rng(2);
  std::vector<PivotPair2x2> pivots;
  for (int k = 0; k < 256; ++k) {
    std::vector<std::vector<double>> c(8);
    for (auto& v : c) v = random_vec(rng, 8);
    auto view = [&](int q) { return cx ? ColView{c[q], c[q + 4]} : ColView{c[q], {}}; };
    pivots.push_back(rescale_pivot(form_pivot(view(0), view(1), view(2), view(3), false)));
  }
  std::size_t k = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(transform(pivots[k]));
    k = (k + 1) % pivots.size();
  }
}
BENCHMARK(BM_Kernel)->Arg(0)->Arg(1)->ArgNames({"complex"});

void BM_Solve(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Field f = st.range(1) ? Field::Complex : Field::Real;
  const GeneratedPair g = gen_pair(random_gen_spec(n, 11, f));
  SolverConfig cfg;
  cfg.variant_id = static_cast<int>(st.range(2));
  for (auto _ : st) benchmark::DoNotOptimize(solve(g.pair, cfg).sigma.data());
}
BENCHMARK(BM_Solve)
    ->ArgsProduct({{32, 64, 128}, {0, 1}, {0, 1}})
    ->ArgNames({"n", "complex", "variant"})
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
