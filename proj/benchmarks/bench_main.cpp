#include <benchmark/benchmark.h>

#include "heavynet/eigensolvers.hpp"
#include "heavynet/expander.hpp"
#include "heavynet/homogenization.hpp"
#include "heavynet/inverse_spectral.hpp"
#include "heavynet/laplacian.hpp"

using namespace heavynet;

namespace {

MeasuredGraph wiring_graph(std::size_t size) {
  return sample_wiring(size, 2, 1).graph(false);
}

void BM_LaplacianApply(benchmark::State& state) {
  const MeasuredGraph g = wiring_graph(static_cast<std::size_t>(state.range(0)));
  const Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(g.vertex_count()), 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(laplacian_apply(g, f));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_LaplacianApply)->Arg(1000)->Arg(8000);

void BM_SmallestK(benchmark::State& state) {
  const MeasuredGraph g = wiring_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_smallest_k(g, 6, 1e-8, 3));
}
BENCHMARK(BM_SmallestK)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_DenseSpectrum(benchmark::State& state) {
  const MeasuredGraph g = wiring_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_dense(g, true));
}
BENCHMARK(BM_DenseSpectrum)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Prescribe(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  std::vector<double> mu;
  for (std::size_t k = 1; k < N; ++k) mu.push_back(static_cast<double>(k) * (1.0 + 0.1 * static_cast<double>(k)));
  for (auto _ : state) benchmark::DoNotOptimize(prescribe_complete_graph(N, 1.0, mu, 1e-9, 0));
}
BENCHMARK(BM_Prescribe)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_SampleWiring(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_wiring(size, 2, seed++));
}
BENCHMARK(BM_SampleWiring)->Arg(512)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CellProblem(benchmark::State& state) {
  const BlockModel b = BlockModel::diamond(3);
  for (auto _ : state) benchmark::DoNotOptimize(effective_conductance(b, 1));
}
BENCHMARK(BM_CellProblem);

}  // namespace
BENCHMARK_MAIN();
