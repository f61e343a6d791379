#include <benchmark/benchmark.h>

#include "mtilt/estimators.hpp"
#include "mtilt/model.hpp"
#include "mtilt/normal.hpp"
#include "mtilt/rng.hpp"
#include "mtilt/summation.hpp"
#include "mtilt/tilting.hpp"

namespace {

using namespace mtilt;

void BM_RngU64(benchmark::State& state) {
  RngStream rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.next_u64());
  }
}
BENCHMARK(BM_RngU64);

void BM_RngUniform(benchmark::State& state) {
  RngStream rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.next_double());
  }
}
BENCHMARK(BM_RngUniform);

void BM_RngNormal(benchmark::State& state) {
  RngStream rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.next_normal());
  }
}
BENCHMARK(BM_RngNormal);

void BM_NormalTail(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_tail(x));
    x += 1e-6;
  }
}
BENCHMARK(BM_NormalTail);

void BM_TiltedStepRademacher(benchmark::State& state) {
  const Model model = Model::rademacher(1024);
  const TiltedStepper stepper(model, 2.0);
  RngStream rng(1, 0);
  CompensatedSum x;
  for (auto _ : state) {
    x.add(stepper.sample(stepper.state(x.value()), rng));
  }
  benchmark::DoNotOptimize(x.value());
}
BENCHMARK(BM_TiltedStepRademacher);

void BM_TiltedStepHeteroscedastic(benchmark::State& state) {
  const Model model = Model::heteroscedastic(1024, 0.01);
  const TiltedStepper stepper(model, 2.0);
  RngStream rng(1, 0);
  CompensatedSum x;
  for (auto _ : state) {
    x.add(stepper.sample(stepper.state(x.value()), rng));
  }
  benchmark::DoNotOptimize(x.value());
}
BENCHMARK(BM_TiltedStepHeteroscedastic);

void BM_TiltedStepTruncatedGaussian(benchmark::State& state) {
  const Model model = Model::truncated_gaussian(1024, 3.0);
  const TiltedStepper stepper(model, 2.0);
  RngStream rng(1, 0);
  CompensatedSum x;
  for (auto _ : state) {
    x.add(stepper.sample(stepper.state(x.value()), rng));
  }
  benchmark::DoNotOptimize(x.value());
}
BENCHMARK(BM_TiltedStepTruncatedGaussian);

void BM_ImportanceTail(benchmark::State& state) {
  const Model model = Model::rademacher(state.range(0));
  TiltConfig config{1.0, model.constants()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_tail(model, 1.0, config, 2000, 1, {1}));
  }
  state.SetItemsProcessed(state.iterations() * 2000 * state.range(0));
}
BENCHMARK(BM_ImportanceTail)->Arg(64)->Arg(256);

void BM_Enumeration(benchmark::State& state) {
  const Model model = Model::rademacher(16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_tail_enumeration(model, 2.0));
  }
}
BENCHMARK(BM_Enumeration);

}  // namespace

BENCHMARK_MAIN();
