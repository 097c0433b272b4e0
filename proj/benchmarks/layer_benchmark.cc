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

#include "splitpriv/classifier.h"
#include "splitpriv/layer.h"
#include "splitpriv/network.h"
#include "splitpriv/rng.h"

namespace splitpriv {
namespace {

Tensor RandomBatch(Shape shape, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(std::move(shape));
  for (float& v : t.data()) v = static_cast<float>(rng.Uniform(-1, 1));
  return t;
}

Layer Initialized(Layer layer, const Shape& sample) {
  Rng rng(1);
  layer.InitializeWeights(sample, rng);
  return layer;
}

void BM_ConvForward(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  const Layer conv = Initialized(Layer::Conv2D(16, 3, 3, 1, 1), {8, 8, 8});
  const Tensor x = RandomBatch({batch, 8, 8, 8}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(conv.Forward(x));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ConvForward)->Arg(1)->Arg(16)->Arg(64);

void BM_ConvBackward(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  const Layer conv = Initialized(Layer::Conv2D(16, 3, 3, 1, 1), {8, 8, 8});
  const Tensor x = RandomBatch({batch, 8, 8, 8}, 2);
  const Tensor y = conv.Forward(x);
  const Tensor g = RandomBatch(y.shape(), 3);
  std::vector<Tensor> grads;
  for (const Tensor& w : conv.weights()) grads.emplace_back(w.shape());
  for (auto _ : state) {
    benchmark::DoNotOptimize(conv.Backward(x, y, g, grads));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ConvBackward)->Arg(16);

void BM_DenseForward(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  const Layer dense = Initialized(Layer::Dense(32), {256});
  const Tensor x = RandomBatch({batch, 256}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(dense.Forward(x));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_DenseForward)->Arg(1)->Arg(64);

void BM_MaxPoolForward(benchmark::State& state) {
  const Layer pool = Layer::MaxPool2D(2, 2);
  const Tensor x = RandomBatch({16, 16, 16, 8}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(pool.Forward(x));
}
BENCHMARK(BM_MaxPoolForward);

void BM_DeskScaleForward(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  const Network net = *MakeDeskScaleClassifier(2, 7);
  const Tensor x = RandomBatch({batch, 16, 16, 1}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(ForwardOutput(net, x));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_DeskScaleForward)->Arg(1)->Arg(16)->Arg(64);

void BM_DeskScaleTrainStep(benchmark::State& state) {
  Network net = *MakeDeskScaleClassifier(2, 7);
  const Tensor x = RandomBatch({16, 16, 16, 1}, 7);
  const std::vector<std::uint16_t> labels(16, 1);
  SgdConfig sgd;
  sgd.epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(TrainClassifier(&net, x, labels, sgd));
  }
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_DeskScaleTrainStep);

}  // namespace
}  // namespace splitpriv

BENCHMARK_MAIN();
