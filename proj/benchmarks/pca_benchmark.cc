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

#include "splitpriv/pca.h"
#include "splitpriv/rng.h"

namespace splitpriv {
namespace {

Tensor Features(std::size_t n, std::size_t d) {
  Rng rng(11);
  Tensor t({n, d});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      // Decaying scales give a non-degenerate spectrum.
      t.row(i)[j] = static_cast<float>(rng.Normal() / (1.0 + j));
    }
  }
  return t;
}

void BM_FitPca(benchmark::State& state) {
  const Tensor x = Features(480, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(FitPca(x, 8));
}
BENCHMARK(BM_FitPca)->Arg(32)->Arg(256)->Arg(1024)->Unit(
    benchmark::kMillisecond);

void BM_ReduceBatch(benchmark::State& state) {
  const std::size_t d = state.range(0);
  const Tensor x = Features(120, d);
  const PcaModel pca = *FitPca(x, 8);
  for (auto _ : state) benchmark::DoNotOptimize(pca.ReduceBatch(x));
  state.SetItemsProcessed(state.iterations() * 120);
}
BENCHMARK(BM_ReduceBatch)->Arg(32)->Arg(1024);

void BM_Reconstruct(benchmark::State& state) {
  const Tensor x = Features(64, 256);
  const PcaModel pca = *FitPca(x, 8);
  const std::vector<float> y = *pca.Reduce(x.row(0));
  for (auto _ : state) benchmark::DoNotOptimize(pca.Reconstruct(y));
}
BENCHMARK(BM_Reconstruct);

}  // namespace
}  // namespace splitpriv

BENCHMARK_MAIN();
