#include <benchmark/benchmark.h>

#include "gibbs_tree/boundary_law.hpp"
#include "gibbs_tree/chain.hpp"
#include "gibbs_tree/exact_oracle.hpp"
#include "gibbs_tree/fixed_points.hpp"
#include "gibbs_tree/phase_diagram.hpp"
#include "gibbs_tree/sampler.hpp"

namespace {

using namespace gibbs_tree;

void BM_EnumerateFixedPoints(benchmark::State& state) {
  const ModelParams p = ModelParams::from_theta(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_fixed_points(p));
}
BENCHMARK(BM_EnumerateFixedPoints);

void BM_BuildMeasure(benchmark::State& state) {
  const ModelParams p = ModelParams::from_theta(2.0);
  const FiniteTree tree(2, static_cast<int>(state.range(0)));
  const BoundaryFields fields = translation_invariant_fields(tree, disordered_state(p));
  for (auto _ : state) benchmark::DoNotOptimize(build_measure(tree, fields, p));
}
BENCHMARK(BM_BuildMeasure)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SampleChain(benchmark::State& state) {
  const ModelParams p = ModelParams::from_theta(2.0);
  const TransitionMatrices m = build_matrices(disordered_state(p), p);
  const auto root = stationary_law(m.two_step);
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_chain(m, root, 2, samples, 42));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleChain)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep(0.1, 4.0, 400));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
