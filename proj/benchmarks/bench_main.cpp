#include "lidreg/clipping.hpp"
#include "lidreg/list_decoder.hpp"
#include "lidreg/loss.hpp"
#include "lidreg/multifilter.hpp"
#include "lidreg/stationary.hpp"
#include "lidreg/synth.hpp"
#include "lidreg/weighted_stats.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace lidreg;

namespace {

GeneratorSpec spec(std::size_t d, std::size_t n, std::size_t m, double alpha, std::size_t k) {
  GeneratorSpec s;
  s.d = d;
  s.n = n;
  s.m = m;
  s.alpha = alpha;
  s.sigma = 0.2;
  s.seed = 1;
  s.w_stars = random_separated_regressors(k, d, 1.0, 1.0, 1);
  return s;
}

AlgoConfig config(const GeneratorSpec& s) {
  AlgoConfig cfg;
  cfg.alpha = s.alpha;
  cfg.sigma = s.sigma;
  return cfg;
}

}  // namespace

static void BM_BatchGradients(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const BatchCollection coll = generate(spec(d, 100, 200, 1.0, 1)).coll;
  const Vector w = Vector::Zero(static_cast<Eigen::Index>(d));
  for (auto _ : state) benchmark::DoNotOptimize(all_batch_clipped_grads(coll, w, 0.5));
  state.SetItemsProcessed(state.iterations() * 200 * 100);
}
BENCHMARK(BM_BatchGradients)->Arg(4)->Arg(16)->Arg(64);

static void BM_SolveStationary(benchmark::State& state) {
  const BatchCollection coll = generate(spec(16, 100, 200, 1.0, 1)).coll;
  const WeightVector beta = WeightVector::ones(coll.size());
  for (auto _ : state) benchmark::DoNotOptimize(solve_stationary(coll, beta, 1.0, 1e-6));
}
BENCHMARK(BM_SolveStationary)->Unit(benchmark::kMillisecond);

static void BM_FindClipping(benchmark::State& state) {
  const GeneratorSpec s = spec(16, 100, 200, 1.0, 1);
  const BatchCollection coll = generate(s).coll;
  const WeightVector beta = WeightVector::ones(coll.size());
  for (auto _ : state) benchmark::DoNotOptimize(find_clipping_parameter(coll, beta, config(s)));
}
BENCHMARK(BM_FindClipping)->Unit(benchmark::kMillisecond);

static void BM_CovTopEig(benchmark::State& state) {
  const auto d = state.range(0);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Matrix z(400, d);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = g(rng);
  const WeightVector beta = WeightVector::ones(400);
  for (auto _ : state) benchmark::DoNotOptimize(cov_top_eig(z, beta));
}
BENCHMARK(BM_CovTopEig)->Arg(8)->Arg(64);

static void BM_Multifilter(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Vector z(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = (i % 2 ? 50.0 : 0.0) + g(rng);
  const WeightVector beta = WeightVector::ones(m);
  for (auto _ : state) benchmark::DoNotOptimize(multifilter(beta, z, 1.0, 0.5, 1.0));
}
BENCHMARK(BM_Multifilter)->Arg(100)->Arg(400)->Arg(1600);

static void BM_RunMixture(benchmark::State& state) {
  const GeneratorSpec s = spec(8, 100, 160, 0.25, 4);
  const BatchCollection coll = generate(s).coll;
  for (auto _ : state) benchmark::DoNotOptimize(run(coll, config(s)));
}
BENCHMARK(BM_RunMixture)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
