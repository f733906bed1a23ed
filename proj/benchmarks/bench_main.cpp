#include <benchmark/benchmark.h>

#include "demix/cone_geometry.hpp"
#include "demix/douglas_rachford.hpp"
#include "demix/experiments.hpp"
#include "demix/linalg.hpp"
#include "demix/random_models.hpp"
#include "demix/thresholds.hpp"

using namespace demix;

namespace {

DenseMatrix gaussian(std::size_t n, RngState& rng) {
  DenseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = rng.normal();
  return m;
}

void BM_Svd(benchmark::State& state) {
  RngState rng(1);
  const auto m = gaussian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(svd(m));
}
BENCHMARK(BM_Svd)->Arg(10)->Arg(20)->Arg(40);

void BM_SolveMca(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  RngState rng(2);
  const auto inst = experiments::make_mca_instance(d, d / 10, d / 10, rng);
  for (auto _ : state) benchmark::DoNotOptimize(solvers::solve_demix(inst.problem));
}
BENCHMARK(BM_SolveMca)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SolveRankSparsity(benchmark::State& state) {
  RngState rng(3);
  const auto inst = experiments::make_rank_sparsity_instance(20, 1, 20, rng);
  for (auto _ : state) benchmark::DoNotOptimize(solvers::solve_demix(inst.problem));
}
BENCHMARK(BM_SolveRankSparsity)->Unit(benchmark::kMillisecond);

void BM_ThetaL1(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(thresholds::theta_l1(0.1));
}
BENCHMARK(BM_ThetaL1)->Unit(benchmark::kMillisecond);

void BM_ProjectCone(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  RngState rng(4);
  const auto x0 = models::sparse_signal(d, d / 2, rng);
  const auto k = cones::l1_descent_cone(models::SparsityPattern::of(x0));
  DenseVector w(d);
  for (auto& x : w) x = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(cones::project_cone(k, w));
}
BENCHMARK(BM_ProjectCone)->Arg(6)->Arg(12);

void BM_IntersectOrthants(benchmark::State& state) {
  RngState rng(5);
  const auto k = cones::orthant_cone(6);
  const auto q = models::haar_orthogonal(6, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cones::intersects_nontrivially(k, k, q));
}
BENCHMARK(BM_IntersectOrthants);

}  // namespace
BENCHMARK_MAIN();
