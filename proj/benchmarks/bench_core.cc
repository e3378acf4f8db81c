#include <benchmark/benchmark.h>

#include <vector>

#include "strips/brasp.h"
#include "strips/datagen.h"
#include "strips/domains.h"
#include "strips/training.h"
#include "strips/transformer.h"

namespace {

using namespace strips;

Trace positive_trace(const Domain& domain, std::size_t length) {
  Rng rng(7);
  return sample_positive(domain, length, rng);
}

Theta random_theta(const Domain& domain) {
  Rng rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Theta theta(domain.atom_count(), domain.action_count());
  for (double& x : theta.values()) x = unit(rng);
  return theta;
}

void BM_ClassifyTrace(benchmark::State& state) {
  const Domain domain = builtin_domain("blocksworld-3b");
  const Trace trace = positive_trace(domain, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classify_trace(domain, trace));
}
BENCHMARK(BM_ClassifyTrace)->Arg(10)->Arg(50);

void BM_BraspClassify(benchmark::State& state) {
  const Domain domain = builtin_domain("blocksworld-3b");
  const brasp::Interpreter interpreter(brasp::compile_domain(domain));
  const Trace trace = positive_trace(domain, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(interpreter.accepts(trace));
}
BENCHMARK(BM_BraspClassify)->Arg(10)->Arg(50);

void BM_Forward(benchmark::State& state) {
  const Domain domain = builtin_domain("ferry-1c");
  const Theta theta = random_theta(domain);
  const Trace trace = positive_trace(domain, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forward(theta, trace));
}
BENCHMARK(BM_Forward)->Arg(10)->Arg(20);

void BM_PositionInconsistency(benchmark::State& state) {
  const Domain domain = builtin_domain("ferry-1c");
  const Theta theta = random_theta(domain);
  const Trace trace = positive_trace(domain, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(position_inconsistency(theta, trace));
}
BENCHMARK(BM_PositionInconsistency)->Arg(10)->Arg(20);

void BM_BatchGradient(benchmark::State& state) {
  const Domain domain = builtin_domain("ferry-1c");
  const Theta theta = random_theta(domain);
  DatasetConfig config;
  config.count = 8;
  config.max_length = 20;
  const Dataset batch = build_dataset(domain, config);
  std::vector<double> grad(theta.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_and_gradient(theta, batch.traces, LossConfig{}, grad));
  }
}
BENCHMARK(BM_BatchGradient);

void BM_TrainSteps(benchmark::State& state) {
  const Domain domain = builtin_simple();
  DatasetConfig data;
  data.count = 200;
  data.seed = 3;
  const Dataset dataset = build_dataset(domain, data);
  TrainConfig config;
  config.max_steps = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        train(dataset, domain.atom_count(), domain.action_count(), config, LossConfig{}));
  }
}
BENCHMARK(BM_TrainSteps)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
