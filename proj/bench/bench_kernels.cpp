// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <vector>

#include "vschro/kernels.hpp"
#include "vschro/operators.hpp"
#include "vschro/problem.hpp"

using namespace vschro;
namespace k = vschro::kernels;

namespace {

std::vector<cplx> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {nd(rng), nd(rng)};
  return v;
}

const Problem& problem_2d(int n) {
  static std::map<int, Problem> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    ProblemSpec s;
    s.dim = 2;
    s.extent = 5.0;
    s.n = n;
    s.diffusion = {"variable_Q", {}, ""};
    it = cache.emplace(n, build_problem(s)).first;
  }
  return it->second;
}

template <bool Parallel>
void BM_spmv(benchmark::State& state) {
  const Problem& p = problem_2d(static_cast<int>(state.range(0)));
  const auto view = p.a.view();
  const auto x = random_values(view.rows, 1);
  std::vector<cplx> y(view.rows);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::omp::spmv(view, x, y);
    else
      k::serial::spmv(view, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(view.vals.size()));
}

template <bool Parallel>
void BM_cell_blocks(benchmark::State& state) {
  const std::size_t cells = static_cast<std::size_t>(state.range(0));
  const auto blocks = random_values(cells * 4, 2);
  const auto x = random_values(cells * 2, 3);
  std::vector<cplx> y(cells * 2);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::omp::apply_cell_blocks(blocks, 2, x, y);
    else
      k::serial::apply_cell_blocks(blocks, 2, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cells));
}

template <bool Parallel>
void BM_dot(benchmark::State& state) {
  const auto x = random_values(static_cast<std::size_t>(state.range(0)), 4);
  const auto y = random_values(x.size(), 5);
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? k::omp::dot(x, y) : k::serial::dot(x, y));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}

template <bool Parallel>
void BM_norm_pow(benchmark::State& state) {
  const auto f = random_values(static_cast<std::size_t>(state.range(0)) * 2, 6);
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? k::omp::sum_cell_norm_pow(f, 2, 4.0) : k::serial::sum_cell_norm_pow(f, 2, 4.0));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size() / 2));
}

}  // namespace

BENCHMARK(BM_spmv<false>)->Arg(128)->Arg(512);
BENCHMARK(BM_spmv<true>)->Arg(128)->Arg(512);
BENCHMARK(BM_cell_blocks<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_cell_blocks<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_dot<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_dot<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_norm_pow<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_norm_pow<true>)->Arg(1 << 16)->Arg(1 << 20);

BENCHMARK_MAIN();
