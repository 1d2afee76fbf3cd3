// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the evaluation and training kernels at the shapes the
// five-dataset protocol actually uses.

#include <benchmark/benchmark.h>

#include <vector>

#include "gradfis/matrix.hpp"
#include "gradfis/model.hpp"
#include "gradfis/rng.hpp"
#include "gradfis/training.hpp"

namespace {

gradfis::FuzzyClassifier make_model(std::size_t inputs, std::size_t classes,
                                    std::size_t mfs, std::size_t rules) {
  auto model = gradfis::init_classifier(inputs, classes, mfs, rules, 42);
  gradfis::SplitMix64 rng(7);
  for (double& v : model.bank.centers.data()) v = rng.unit();
  for (double& v : model.rules.consequents.data()) v = rng.range(-1.0, 1.0);
  return model;
}

void BM_ForwardWineShape(benchmark::State& state) {
  const auto model = make_model(13, 3, 13, 300);
  gradfis::SplitMix64 rng(3);
  std::vector<double> x(13);
  for (double& v : x) v = rng.unit();
  for (auto _ : state) {
    auto result = gradfis::forward(model, x);
    benchmark::DoNotOptimize(result.probs.data());
  }
}
BENCHMARK(BM_ForwardWineShape);

void BM_ForwardWdbcShape(benchmark::State& state) {
  const auto model = make_model(30, 2, 13, 202);
  gradfis::SplitMix64 rng(3);
  std::vector<double> x(30);
  for (double& v : x) v = rng.unit();
  for (auto _ : state) {
    auto result = gradfis::forward(model, x);
    benchmark::DoNotOptimize(result.probs.data());
  }
}
BENCHMARK(BM_ForwardWdbcShape);

void BM_Fuzzify(benchmark::State& state) {
  const auto model = make_model(13, 3, 13, 300);
  gradfis::SplitMix64 rng(3);
  std::vector<double> x(13);
  for (double& v : x) v = rng.unit();
  for (auto _ : state) {
    auto memberships = gradfis::fuzzify(model, x);
    benchmark::DoNotOptimize(memberships.data().data());
  }
}
BENCHMARK(BM_Fuzzify);

void BM_GradientsFullBatch(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto model = make_model(13, 3, 13, 300);
  gradfis::SplitMix64 rng(5);
  gradfis::Matrix<double> batch(rows, 13);
  for (double& v : batch.data()) v = rng.unit();
  std::vector<int> labels(rows);
  for (int& y : labels) y = static_cast<int>(rng.below(3));
  for (auto _ : state) {
    auto lg = gradfis::gradients(model, batch, labels);
    benchmark::DoNotOptimize(lg.grad.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rows));
}
BENCHMARK(BM_GradientsFullBatch)->Arg(64)->Arg(142)->Arg(800);

void BM_AdamStep(benchmark::State& state) {
  const std::size_t count = 10000;
  std::vector<double> params(count, 0.1);
  std::vector<double> grads(count, 0.01);
  gradfis::AdamState adam(count, 0.01);
  for (auto _ : state) {
    gradfis::adam_step(params, grads, adam);
    benchmark::DoNotOptimize(params.data());
  }
}
BENCHMARK(BM_AdamStep);

}  // namespace

BENCHMARK_MAIN();
