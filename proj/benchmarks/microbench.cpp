#include <benchmark/benchmark.h>

#include "bobak/acquisition.hpp"
#include "bobak/benchmarks.hpp"
#include "bobak/gp.hpp"
#include "bobak/harness.hpp"
#include "bobak/optimizer.hpp"

namespace {

using namespace bobak;

Dataset sample_data(const benchmarks::BenchmarkSetting& s, int n) {
  Rng rng = make_stream(1, Stream::Init);
  Dataset d;
  for (int i = 0; i < n; ++i) {
    const Point x = uniform_point(s.domain, rng);
    d.append(x, s.function(x));
  }
  return d;
}

Kernel sum_kernel(const benchmarks::BenchmarkSetting& s) {
  return Kernel::sum(KernelHyper::isotropic(s.dimension, 2.0), s.warp, KernelHyper::isotropic(2, 0.5));
}

void BM_Gram(benchmark::State& state) {
  const auto s = benchmarks::make_setting("ackley10d");
  const auto data = sample_data(s, static_cast<int>(state.range(0)));
  const Kernel k = sum_kernel(s);
  for (auto _ : state) benchmark::DoNotOptimize(gram(data.points(), k));
}
BENCHMARK(BM_Gram)->Arg(20)->Arg(100);

void BM_FitPosterior(benchmark::State& state) {
  const auto s = benchmarks::make_setting("ackley10d");
  const auto data = sample_data(s, static_cast<int>(state.range(0)));
  const Kernel k = sum_kernel(s);
  for (auto _ : state) benchmark::DoNotOptimize(fit_posterior(data, k, 1e-4));
}
BENCHMARK(BM_FitPosterior)->Arg(20)->Arg(100);

void BM_LmlGradient(benchmark::State& state) {
  const auto s = benchmarks::make_setting("ackley10d");
  const auto data = sample_data(s, static_cast<int>(state.range(0)));
  const Kernel k = sum_kernel(s);
  for (auto _ : state) benchmark::DoNotOptimize(log_marginal_likelihood_with_gradient(data, k, 1e-4));
}
BENCHMARK(BM_LmlGradient)->Arg(20)->Arg(100);

void BM_ProposeNext(benchmark::State& state) {
  const auto s = benchmarks::make_setting("ackley10d");
  const auto model = fit_posterior(sample_data(s, static_cast<int>(state.range(0))), sum_kernel(s), 1e-4);
  Rng rng = make_stream(2, Stream::Acquisition);
  for (auto _ : state) benchmark::DoNotOptimize(propose_next(model, s.domain, {}, rng));
}
BENCHMARK(BM_ProposeNext)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Hyperopt(benchmark::State& state) {
  const auto s = benchmarks::make_setting("ackley10d");
  const auto data = sample_data(s, static_cast<int>(state.range(0)));
  const auto space = hyperopt_space(s.objective());
  for (auto _ : state) {
    Rng rng = make_stream(3, Stream::HyperoptSum);
    benchmark::DoNotOptimize(optimize_hyperparameters(data, sum_kernel(s), 1e-4, space, {}, rng));
  }
}
BENCHMARK(BM_Hyperopt)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
