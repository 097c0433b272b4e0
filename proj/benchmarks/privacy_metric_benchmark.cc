// Copyright 2026 The Splitpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "splitpriv/privacy_metric.h"
#include "splitpriv/rng.h"

namespace splitpriv {
namespace {

// T = 20 classes with 24 reference features each, as in the sweep.
PrivacyMetricInput Instance(std::size_t k, std::size_t points) {
  Rng rng(5);
  PrivacyMetricInput in;
  in.num_classes = 20;
  in.sigma = 0.5;
  in.features = Tensor({480, k});
  for (float& v : in.features.data()) v = static_cast<float>(rng.Normal());
  for (std::size_t j = 0; j < 480; ++j) in.feature_labels.push_back(j % 20);
  in.points = Tensor({points, k});
  for (float& v : in.points.data()) v = static_cast<float>(rng.Normal());
  for (std::size_t n = 0; n < points; ++n) in.point_labels.push_back(n % 20);
  return in;
}

void BM_ClassLogLikelihoods(benchmark::State& state) {
  const PrivacyMetricInput in = Instance(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ClassLogLikelihoods(in.points.row(0), in));
  }
}
BENCHMARK(BM_ClassLogLikelihoods)->Arg(2)->Arg(8)->Arg(32);

void BM_PrivacyTotal(benchmark::State& state) {
  const PrivacyMetricInput in = Instance(8, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(PrivacyTotal(in));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PrivacyTotal)->Arg(120)->Arg(480)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace splitpriv

BENCHMARK_MAIN();
