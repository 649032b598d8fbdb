// Serial reference kernels against their OpenMP counterparts.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "pnu/kernels.hpp"
#include "pnu/rng.hpp"

namespace {

pnu::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  pnu::Rng rng(seed);
  pnu::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

template <auto Kernel>
void design(benchmark::State& state) {
  const auto n = state.range(0);
  const pnu::Matrix x = random_matrix(n, 10, 1);
  const pnu::Matrix c = random_matrix(std::min<Eigen::Index>(n, 500), 10, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(x, c, 1.5));
  state.SetItemsProcessed(state.iterations() * n * c.rows());
}

template <auto Kernel>
void gram(benchmark::State& state) {
  const pnu::Matrix phi = random_matrix(state.range(0), 300, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(phi));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void cross_distances(benchmark::State& state) {
  const pnu::Matrix a = random_matrix(state.range(0), 5, 4);
  const pnu::Matrix b = random_matrix(state.range(0), 5, 5);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Kernel>
void within_distances(benchmark::State& state) {
  const pnu::Matrix a = random_matrix(state.range(0), 5, 6);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a));
  state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}

}  // namespace

BENCHMARK(design<pnu::kernels::reference::gaussian_design>)->Name("gaussian_design/serial")->Arg(1000)->Arg(4000);
BENCHMARK(design<pnu::kernels::gaussian_design>)->Name("gaussian_design/omp")->Arg(1000)->Arg(4000);
BENCHMARK(gram<pnu::kernels::reference::gram>)->Name("gram/serial")->Arg(1000)->Arg(4000);
BENCHMARK(gram<pnu::kernels::gram>)->Name("gram/omp")->Arg(1000)->Arg(4000);
BENCHMARK(cross_distances<pnu::kernels::reference::cross_distance_sum>)->Name("cross_distance_sum/serial")->Arg(1000)->Arg(3000);
BENCHMARK(cross_distances<pnu::kernels::cross_distance_sum>)->Name("cross_distance_sum/omp")->Arg(1000)->Arg(3000);
BENCHMARK(within_distances<pnu::kernels::reference::within_distance_sum>)->Name("within_distance_sum/serial")->Arg(1000)->Arg(3000);
BENCHMARK(within_distances<pnu::kernels::within_distance_sum>)->Name("within_distance_sum/omp")->Arg(1000)->Arg(3000);

BENCHMARK_MAIN();
