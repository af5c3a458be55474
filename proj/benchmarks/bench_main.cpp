#include <benchmark/benchmark.h>

#include <deque>
#include <numeric>

#include "mblbfgs/batching.hpp"
#include "mblbfgs/data.hpp"
#include "mblbfgs/direction.hpp"
#include "mblbfgs/model.hpp"

namespace {

using namespace mblbfgs;

ParamVector random_vector(Rng& rng, std::size_t d) {
  ParamVector v(d);
  for (auto& x : v) x = rng.normal();
  return v;
}

// Pairs with t = s + small noise, so t.s > 0 with overwhelming probability.
std::deque<CurvaturePair> make_pairs(Rng& rng, std::size_t d, std::size_t count) {
  std::deque<CurvaturePair> pairs;
  while (pairs.size() < count) {
    auto s = random_vector(rng, d);
    auto t = axpy(0.1, random_vector(rng, d), s);
    if (auto p = CurvaturePair::make(std::move(s), std::move(t))) pairs.push_back(std::move(*p));
  }
  return pairs;
}

void BM_TwoLoop(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  const auto pairs = make_pairs(rng, d, m);
  const auto g = random_vector(rng, d);
  for (auto _ : state) benchmark::DoNotOptimize(two_loop_direction(pairs, g));
  state.SetItemsProcessed(static_cast<long>(state.iterations()));
}
BENCHMARK(BM_TwoLoop)->Args({1157, 1})->Args({1157, 10})->Args({1157, 32})->Args({100000, 10});

void BM_MlpLossAndGrad(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Dataset ds = synth_gaussian_blobs(2, rows / 2, 30, 2.0, 3);
  std::vector<std::size_t> idx(ds.rows());
  std::iota(idx.begin(), idx.end(), 0u);
  const Batch batch = gather(ds, idx);
  const MlpSpec spec{30, 35, 2, Activation::tanh};
  Rng rng(2);
  const auto theta = initial_parameters(spec, rng);
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_grad(spec, theta, batch));
  state.SetItemsProcessed(static_cast<long>(state.iterations() * rows));
}
BENCHMARK(BM_MlpLossAndGrad)->Arg(64)->Arg(256);

void BM_OverlapSampler(benchmark::State& state) {
  OverlapSampler sampler(static_cast<std::size_t>(state.range(0)), 256, 0.45, Rng(4));
  for (auto _ : state) benchmark::DoNotOptimize(sampler.next_batch().data());
}
BENCHMARK(BM_OverlapSampler)->Arg(436)->Arg(60000);

}  // namespace

BENCHMARK_MAIN();
