#include <benchmark/benchmark.h>

#include "mgs/approx.hpp"
#include "mgs/exact.hpp"
#include "mgs/satenc.hpp"
#include "mgs/spinrep.hpp"
#include "mgs/targets.hpp"

namespace {

void BM_RingProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto w = mgs::random_word(n, 16, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mgs::eval_product(n, w));
}
BENCHMARK(BM_RingProduct)->Arg(2)->Arg(4)->Arg(8);

void BM_ExactSynthesis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int t = static_cast<int>(state.range(1));
  mgs::TransferMatrix q = mgs::random_ring_target(n, t, 7);
  for (auto _ : state) benchmark::DoNotOptimize(mgs::synthesize(q));
}
BENCHMARK(BM_ExactSynthesis)->Args({2, 8})->Args({4, 8})->Args({4, 32})->Args({8, 32})->Unit(benchmark::kMillisecond);

void BM_Encode(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  mgs::TransferMatrix q = mgs::TransferMatrix::identity(n);
  for (auto _ : state) {
    auto inst = mgs::encode(q, d);
    state.counters["clauses"] = static_cast<double>(inst.clauses.size());
    benchmark::DoNotOptimize(inst);
  }
}
BENCHMARK(BM_Encode)->Args({2, 4})->Args({3, 4})->Args({4, 8})->Unit(benchmark::kMillisecond);

void BM_PlantedSolve(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto w = mgs::random_word(2, d / 2, 3);
  mgs::Circuit c = mgs::Circuit::from_gates(2, w);
  mgs::TransferMatrix q = mgs::eval_circuit(c);
  auto inst = mgs::encode(q, c.depth());
  for (auto _ : state) benchmark::DoNotOptimize(mgs::solve(inst));
  state.counters["depth"] = c.depth();
}
BENCHMARK(BM_PlantedSolve)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Su2Search(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  mgs::Su2Searcher searcher;
  double theta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(searcher.search(mgs::su2_rz(theta), eps));
    theta += 0.37;
  }
}
BENCHMARK(BM_Su2Search)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TransferMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto u = mgs::circuit_unitary(n, mgs::random_word(n, 6, 5));
  for (auto _ : state) benchmark::DoNotOptimize(mgs::transfer_matrix(u));
}
BENCHMARK(BM_TransferMatrix)->DenseRange(2, 6, 2);

}  // namespace

BENCHMARK_MAIN();
