/*
 * Copyright 2026 The mggp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */


#include <benchmark/benchmark.h>

#include "mggp/gp.hpp"
#include "mggp/inference.hpp"
#include "mggp/simulate.hpp"

namespace {

using namespace mggp;

GroupedDataset dataset(int perGroup) {
  ScenarioSpec sc;
  sc.groupSizes = {perGroup, perGroup};
  sc.seed = 1;
  return generate(sc);
}

KernelSpec mgRbf() { return KernelSpec(Family::kMgRbf, 1, {1.0, 1.0, 1.0, std::nullopt, std::nullopt}, discreteMetric(2)); }

void BM_Gram(benchmark::State& state) {
  const GroupedDataset d = dataset(static_cast<int>(state.range(0)) / 2);
  const KernelSpec k = mgRbf();
  for (auto _ : state) benchmark::DoNotOptimize(k.gram(d.X, d.groups));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gram)->RangeMultiplier(2)->Range(50, 800)->Complexity();

void BM_Matern(benchmark::State& state) {
  const GroupedDataset d = dataset(static_cast<int>(state.range(0)) / 2);
  const KernelSpec k(Family::kMgMatern, 1, {1.0, 1.0, 1.0, 1.0, 1.5}, discreteMetric(2));
  for (auto _ : state) benchmark::DoNotOptimize(k.gram(d.X, d.groups));
}
BENCHMARK(BM_Matern)->Arg(200);

void BM_CholeskyWithJitter(benchmark::State& state) {
  const GroupedDataset d = dataset(static_cast<int>(state.range(0)) / 2);
  Eigen::MatrixXd S = mgRbf().gram(d.X, d.groups);
  S.diagonal().array() += 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(choleskyWithJitter(S));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CholeskyWithJitter)->RangeMultiplier(2)->Range(50, 800)->Complexity(benchmark::oNCubed);

void BM_LogLik(benchmark::State& state) {
  const GroupedDataset d = dataset(static_cast<int>(state.range(0)) / 2);
  const KernelSpec k = mgRbf();
  for (auto _ : state) benchmark::DoNotOptimize(logMarginalLikelihood(k, d, NoiseSpec::shared(0.1)));
}
BENCHMARK(BM_LogLik)->Arg(200)->Arg(400);

void BM_LogLikGradient(benchmark::State& state) {
  const GroupedDataset d = dataset(static_cast<int>(state.range(0)) / 2);
  const KernelSpec k = mgRbf();
  for (auto _ : state) benchmark::DoNotOptimize(logMarginalLikelihoodGradient(k, d, NoiseSpec::shared(0.1)));
}
BENCHMARK(BM_LogLikGradient)->Arg(200)->Arg(400);

void BM_FitMle(benchmark::State& state) {
  const GroupedDataset d = dataset(100);
  const ModelTemplate m{mgRbf(), NoiseSpec::shared(0.1), {}};
  FitOptions opt;
  opt.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(fitMLE(m, d, opt));
}
BENCHMARK(BM_FitMle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
