/*
 * Copyright 2026 The multiuplift Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference kernels against their OpenMP counterparts.

#include <vector>

#include "benchmark/benchmark.h"
#include "multiuplift/kernels.h"
#include "multiuplift/random.h"

namespace multiuplift {
namespace {

struct Inputs {
  Matrix x;
  std::vector<double> y;
  Vector w;
  Vector penalty;
};

Inputs MakeInputs(Eigen::Index n, Eigen::Index d) {
  Rng rng(42);
  Inputs in{Matrix(n, d), std::vector<double>(static_cast<std::size_t>(n)), Vector(d),
            Vector::Constant(d, 1e-3)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) in.x(i, j) = rng.Normal();
    in.y[static_cast<std::size_t>(i)] = rng.Bernoulli(0.3) ? 1.0 : 0.0;
  }
  for (Eigen::Index j = 0; j < d; ++j) in.w(j) = 0.1 * rng.Normal();
  return in;
}

template <auto Kernel>
void BM_LogisticLossGradient(benchmark::State& state) {
  const Inputs in = MakeInputs(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(in.x, in.y, in.w, 0.1, in.penalty));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_LinearPredictor(benchmark::State& state) {
  const Inputs in = MakeInputs(state.range(0), state.range(1));
  std::vector<double> out(in.y.size());
  for (auto _ : state) {
    Kernel(in.x, in.w, 0.1, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_Cross(benchmark::State& state) {
  const Inputs in = MakeInputs(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(in.x, in.y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void Sizes(benchmark::internal::Benchmark* b) {
  for (const int n : {2000, 20000, 200000}) b->Args({n, 6});
}

BENCHMARK(BM_LogisticLossGradient<kernels::serial::LogisticLossGradient>)->Apply(Sizes);
BENCHMARK(BM_LogisticLossGradient<kernels::parallel::LogisticLossGradient>)->Apply(Sizes);
BENCHMARK(BM_LinearPredictor<kernels::serial::LinearPredictor>)->Apply(Sizes);
BENCHMARK(BM_LinearPredictor<kernels::parallel::LinearPredictor>)->Apply(Sizes);
BENCHMARK(BM_Cross<kernels::serial::Cross>)->Apply(Sizes);
BENCHMARK(BM_Cross<kernels::parallel::Cross>)->Apply(Sizes);

}  // namespace
}  // namespace multiuplift

BENCHMARK_MAIN();
