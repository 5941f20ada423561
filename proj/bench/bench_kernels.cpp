#include <benchmark/benchmark.h>

#include "gcatlab/graph.hpp"
#include "gcatlab/kernels.hpp"
#include "gcatlab/rng.hpp"

#include <map>

using namespace gcatlab;

namespace {

DenseMatrix filled(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform01(rng) - 0.5;
  return m;
}

struct GridFixture {
  Graph g;
  CsrMatrix a;
  DenseMatrix dense_a;
  explicit GridFixture(std::size_t side) : g(grid_graph(side, side)), a(normalized_adjacency(g).matrix()), dense_a(a.to_dense()) {}
};

const GridFixture& grid(std::size_t side) {
  static std::map<std::size_t, GridFixture> cache;
  auto it = cache.find(side);
  if (it == cache.end()) it = cache.emplace(side, GridFixture(side)).first;
  return it->second;
}

template <bool Parallel>
void BM_Spmm(benchmark::State& state) {
  const auto& f = grid(static_cast<std::size_t>(state.range(0)));
  const DenseMatrix x = filled(f.g.num_nodes(), static_cast<std::size_t>(state.range(1)), 1);
  DenseMatrix out;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::spmm(f.a, x, out);
    else kernels::serial::spmm(f.a, x, out);
    benchmark::DoNotOptimize(out.values().data());
  }
}

template <bool Parallel>
void BM_DenseGconv(benchmark::State& state) {
  const auto& f = grid(static_cast<std::size_t>(state.range(0)));
  const DenseMatrix x = filled(f.g.num_nodes(), static_cast<std::size_t>(state.range(1)), 2);
  DenseMatrix out;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::gemm(f.dense_a, x, out);
    else kernels::serial::gemm(f.dense_a, x, out);
    benchmark::DoNotOptimize(out.values().data());
  }
}

template <bool Parallel>
void BM_Hconcat(benchmark::State& state) {
  const auto& f = grid(static_cast<std::size_t>(state.range(0)));
  const DenseMatrix x = filled(f.g.num_nodes(), static_cast<std::size_t>(state.range(1)), 3);
  DenseMatrix out;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::hconcat(f.dense_a, x, out);
    else kernels::serial::hconcat(f.dense_a, x, out);
    benchmark::DoNotOptimize(out.values().data());
  }
}

template <bool Parallel>
void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix a = filled(n, n, 4), b = filled(n, 64, 5);
  DenseMatrix out;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::gemm(a, b, out);
    else kernels::serial::gemm(a, b, out);
    benchmark::DoNotOptimize(out.values().data());
  }
}

}  // namespace

BENCHMARK(BM_Spmm<false>)->Name("spmm/serial")->Args({50, 1})->Args({50, 64})->Args({100, 64});
BENCHMARK(BM_Spmm<true>)->Name("spmm/omp")->Args({50, 1})->Args({50, 64})->Args({100, 64});
BENCHMARK(BM_DenseGconv<false>)->Name("dense_gconv/serial")->Args({30, 1})->Args({30, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseGconv<true>)->Name("dense_gconv/omp")->Args({30, 1})->Args({30, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hconcat<false>)->Name("hconcat/serial")->Args({30, 1})->Args({30, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hconcat<true>)->Name("hconcat/omp")->Args({30, 1})->Args({30, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gemm<false>)->Name("gemm/serial")->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gemm<true>)->Name("gemm/omp")->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
