#include <benchmark/benchmark.h>

#include <random>

#include "sigmoment/kernels.hpp"

using namespace sigmoment;

namespace {

std::vector<Point<double>> points(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Point<double>> pts(n, Point<double>(d));
  for (auto& p : pts)
    for (auto& v : p) v = u(rng);
  return pts;
}

template <bool Parallel>
void evaluation(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)), 3);
  const auto basis = enumerate_basis(3, 6);
  for (auto _ : state) {
    auto v = Parallel ? kernels::evaluation_matrix(pts, basis) : kernels::serial::evaluation_matrix(pts, basis);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(basis.size()));
}

template <bool Parallel>
void moments(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)), 2);
  const std::vector<double> w(pts.size(), 0.5);
  const auto basis = enumerate_basis(2, 8);
  for (auto _ : state) {
    auto m = Parallel ? kernels::weighted_moments(pts, w, basis) : kernels::serial::weighted_moments(pts, w, basis);
    benchmark::DoNotOptimize(m);
  }
}

template <bool Parallel>
void growth(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)), 2);
  const auto p = Polynomial<double>::coordinate(2, 0).pow(5) + Polynomial<double>::growth_weight(2, 2);
  for (auto _ : state) {
    auto r = Parallel ? kernels::growth_ratios(p, 2, pts) : kernels::serial::growth_ratios(p, 2, pts);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(evaluation<false>)->Name("evaluation_matrix/serial")->Arg(1000)->Arg(20000);
BENCHMARK(evaluation<true>)->Name("evaluation_matrix/omp")->Arg(1000)->Arg(20000);
BENCHMARK(moments<false>)->Name("weighted_moments/serial")->Arg(1000)->Arg(20000);
BENCHMARK(moments<true>)->Name("weighted_moments/omp")->Arg(1000)->Arg(20000);
BENCHMARK(growth<false>)->Name("growth_ratios/serial")->Arg(10000)->Arg(200000);
BENCHMARK(growth<true>)->Name("growth_ratios/omp")->Arg(10000)->Arg(200000);

BENCHMARK_MAIN();
