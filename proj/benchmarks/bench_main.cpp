#include <benchmark/benchmark.h>

#include "ttsac/analytics.hpp"
#include "ttsac/operators.hpp"

namespace {

using namespace ttsac;

System affine(std::size_t d) {
  return AffineSystem(0.5 * Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)),
                      Vector::Ones(static_cast<Eigen::Index>(d)), LaggedCovarianceModel::isotropic(d, 1.0, 0.5));
}

void BM_GenerateSequence(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const System s = affine(d);
  const Feature f(Vector::Zero(static_cast<Eigen::Index>(d)));
  const auto motion = MotionSequence::stationary(0, 40);
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_sequence(s, f, motion, 40, SeedSpec(++i)));
  }
  state.SetItemsProcessed(state.iterations() * 40);
}
BENCHMARK(BM_GenerateSequence)->Arg(8)->Arg(32)->Arg(64);

void BM_AggregatedCovariance(benchmark::State& state) {
  const auto K = static_cast<std::size_t>(state.range(0));
  const auto model = LaggedCovarianceModel::isotropic(64, 1.0, 0.9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aggregated_covariance(model, K));
  }
}
BENCHMARK(BM_AggregatedCovariance)->Arg(4)->Arg(32)->Arg(256);

void BM_KSweep(benchmark::State& state) {
  const auto trials = static_cast<std::size_t>(state.range(0));
  const auto noise = LaggedCovarianceModel::isotropic(16, 2.0, 0.0);
  const System s = LinearPipelineSystem::random(8, 16, 4, 2.0, noise, SeedSpec(1));
  const MotionParams motion{.dim = 4, .noiseScale = 0.0, .driftRate = 0.1, .direction = Vector::Unit(4, 0)};
  const Feature f(Vector::Ones(8));
  for (auto _ : state) {
    benchmark::DoNotOptimize(k_sweep(s, f, motion, 10, trials, SeedSpec(2)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials));
}
BENCHMARK(BM_KSweep)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
