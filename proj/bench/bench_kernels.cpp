// Parallel kernels against the serial reference. Arguments: m, n, threads
// (threads 0 selects the reference path).

#include <benchmark/benchmark.h>

#include <vector>

#include "seb/kernels.hpp"
#include "seb/problem.hpp"
#include "seb/smooth_model.hpp"

namespace {

struct Fixture {
  seb::Instance inst;
  seb::Vector x, d, w, g, f, e, out;

  Fixture(std::size_t m, std::size_t n)
      : inst(seb::generate_instance(m, n)), x(n, 50.0), d(n, 1.0), w(m, 1.0 / m), g(m), f(m),
        e(m), out(n) {}
};

void set_threads(const benchmark::State& state) {
  if (state.range(2) > 0) seb::kernels::set_num_threads(static_cast<int>(state.range(2)));
}

void BM_distances(benchmark::State& state) {
  Fixture fx(state.range(0), state.range(1));
  set_threads(state);
  const bool ref = state.range(2) == 0;
  for (auto _ : state) {
    const double v = ref ? seb::reference::distances(fx.inst, fx.x, 0.01, fx.g, fx.f)
                         : seb::kernels::distances(fx.inst, fx.x, 0.01, fx.g, fx.f);
    benchmark::DoNotOptimize(v);
  }
  state.SetBytesProcessed(state.iterations() * state.range(0) * state.range(1) * 8);
}

void BM_sum(benchmark::State& state) {
  Fixture fx(state.range(0), 1);
  set_threads(state);
  const bool ref = state.range(2) == 0;
  for (auto _ : state) {
    const double v = ref ? seb::reference::sum(fx.w) : seb::kernels::sum(fx.w);
    benchmark::DoNotOptimize(v);
  }
}

void BM_weighted_offsets(benchmark::State& state) {
  Fixture fx(state.range(0), state.range(1));
  set_threads(state);
  const bool ref = state.range(2) == 0;
  const auto idx = seb::IndexSet::all(fx.inst.size());
  for (auto _ : state) {
    if (ref)
      seb::reference::weighted_offsets(fx.inst, fx.x, idx, fx.w, fx.out);
    else
      seb::kernels::weighted_offsets(fx.inst, fx.x, idx, fx.w, fx.out);
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetBytesProcessed(state.iterations() * state.range(0) * state.range(1) * 8);
}

void BM_rank_one_sum(benchmark::State& state) {
  Fixture fx(state.range(0), state.range(1));
  set_threads(state);
  const bool ref = state.range(2) == 0;
  const auto idx = seb::IndexSet::all(fx.inst.size());
  for (auto _ : state) {
    if (ref)
      seb::reference::rank_one_sum(fx.inst, fx.x, idx, fx.w, fx.d, fx.out);
    else
      seb::kernels::rank_one_sum(fx.inst, fx.x, idx, fx.w, fx.d, fx.out);
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetBytesProcessed(state.iterations() * state.range(0) * state.range(1) * 8);
}

void BM_hessian_vector(benchmark::State& state) {
  Fixture fx(state.range(0), state.range(1));
  set_threads(state);
  const seb::EvalWorkspace ws = seb::build_workspace(fx.inst, fx.x, 0.01);
  const seb::Vector grad = seb::smoothed_gradient(ws);
  const seb::StructuredHessian h(ws, seb::IndexSet::all(fx.inst.size()), ws.lambda(), grad);
  for (auto _ : state) {
    h.apply(fx.d, fx.out);
    benchmark::DoNotOptimize(fx.out.data());
  }
}

void args(benchmark::internal::Benchmark* b) {
  for (auto [m, n] : {std::pair<long, long>{16000, 100}, {10000, 1000}, {2000, 5000}})
    for (long t : {0, 1, 2, 4}) b->Args({m, n, t});
  b->ArgNames({"m", "n", "threads"});
}

}  // namespace

BENCHMARK(BM_distances)->Apply(args)->UseRealTime();
BENCHMARK(BM_sum)->ArgsProduct({{1 << 14, 1 << 20}, {1}, {0, 1, 2, 4}})->ArgNames({"m", "", "threads"})->UseRealTime();
BENCHMARK(BM_weighted_offsets)->Apply(args)->UseRealTime();
BENCHMARK(BM_rank_one_sum)->Apply(args)->UseRealTime();
BENCHMARK(BM_hessian_vector)->ArgsProduct({{16000, 64000}, {100}, {1, 2, 4}})->ArgNames({"m", "n", "threads"})->UseRealTime();

BENCHMARK_MAIN();
