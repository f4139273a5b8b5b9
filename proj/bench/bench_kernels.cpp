// OpenMP kernels against their serial references.

#include "qmcs/dihp.hpp"
#include "qmcs/exact.hpp"
#include "qmcs/fourier.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace qmcs;

namespace {

WeightedGraph ring_with_chords(std::size_t n) {
  WeightedGraph g(n);
  for (Vertex v = 0; v < n; ++v) g.add_edge(v, static_cast<Vertex>((v + 1) % n));
  for (Vertex v = 0; v + 3 < n; v += 2) g.add_edge(v, v + 3);
  return g;
}

template <bool Parallel>
void BM_qmc_apply(benchmark::State& state) {
  const QmcOperator op(ring_with_chords(static_cast<std::size_t>(state.range(0))));
  std::vector<double> in(op.dimension(), 1.0), out(op.dimension());
  Rng rng(1);
  for (auto& x : in) x = rng.normal();
  for (auto _ : state) {
    if constexpr (Parallel) op.apply(in, out);
    else serial::qmc_apply(op, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(op.dimension()));
}

template <bool Parallel>
void BM_fwht(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Complex> data(std::size_t{1} << n);
  Rng rng(2);
  for (auto& x : data) x = Complex(rng.normal(), rng.normal());
  for (auto _ : state) {
    if constexpr (Parallel) fwht(data, n, 1);
    else serial::fwht(data, n, 1);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}

template <bool Parallel>
void BM_separation(benchmark::State& state) {
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto r = Parallel ? separation_experiment(32, 4, 8, trials, 1) : serial::separation_experiment(32, 4, 8, trials, 1);
    benchmark::DoNotOptimize(r.records.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * trials));
}

}  // namespace

BENCHMARK(BM_qmc_apply<true>)->Name("qmc_apply/parallel")->Arg(10)->Arg(14);
BENCHMARK(BM_qmc_apply<false>)->Name("qmc_apply/serial")->Arg(10)->Arg(14);
BENCHMARK(BM_fwht<true>)->Name("fwht/parallel")->Arg(12)->Arg(18);
BENCHMARK(BM_fwht<false>)->Name("fwht/serial")->Arg(12)->Arg(18);
BENCHMARK(BM_separation<true>)->Name("separation/parallel")->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_separation<false>)->Name("separation/serial")->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
