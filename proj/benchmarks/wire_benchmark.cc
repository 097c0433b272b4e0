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

#include "splitpriv/wire.h"

namespace splitpriv {
namespace {

FeatureMessage Message(std::size_t dim) {
  FeatureMessage msg;
  msg.split_index = 9;
  msg.payload.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) msg.payload[i] = 0.25f * i;
  return msg;
}

void BM_Encode(benchmark::State& state) {
  const FeatureMessage msg = Message(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(EncodeFeatureMessage(msg));
  state.SetBytesProcessed(state.iterations() *
                          FeatureMessageBytes(msg.payload.size()));
}
BENCHMARK(BM_Encode)->Arg(8)->Arg(32)->Arg(2048);

void BM_Decode(benchmark::State& state) {
  const std::vector<std::uint8_t> bytes =
      EncodeFeatureMessage(Message(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(DecodeFeatureMessage(bytes));
  state.SetBytesProcessed(state.iterations() * bytes.size());
}
BENCHMARK(BM_Decode)->Arg(8)->Arg(32)->Arg(2048);

}  // namespace
}  // namespace splitpriv

BENCHMARK_MAIN();
