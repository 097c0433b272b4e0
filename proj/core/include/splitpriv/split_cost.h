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

#ifndef SPLITPRIV_SPLIT_COST_H_
#define SPLITPRIV_SPLIT_COST_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "splitpriv/network.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

// Per-sample operation count of every layer. Convolutions count
// 2*C_in*kh*kw per output element, dense layers 2*d_in per output, every
// other layer one per output element.
std::vector<std::uint64_t> LayerFlops(const Network& net);

struct SplitCostRecord {
  std::size_t split_index = 0;
  std::uint64_t client_flops = 0;  // per sample
  std::uint64_t server_flops = 0;
  std::uint64_t payload_bytes = 0;          // simple embedding message
  std::uint64_t reduced_payload_bytes = 0;  // ReducedDim coordinates
  double client_wall_time_us = 0.0;         // median over runs, whole batch
  double server_wall_time_us = 0.0;
};

// Coordinates a reduced embedding sends at a boundary of width dim:
// min(k, dim - 1), since keeping every direction would not reduce anything.
std::size_t ReducedDim(std::uint32_t pca_dim, std::size_t dim);

struct BenchConfig {
  std::vector<std::size_t> splits;  // empty means every valid split
  std::uint32_t pca_dim = 8;
  std::size_t runs = 30;
};

// Analytic costs plus measured medians of head and tail forward passes on
// batch.
absl::StatusOr<std::vector<SplitCostRecord>> BenchSplits(
    const Network& net, const Tensor& batch, const BenchConfig& cfg);

// split_index,client_flops,server_flops,payload_bytes,reduced_payload_bytes,
// client_wall_time_us,server_wall_time_us
void WriteSplitCostCsv(std::span<const SplitCostRecord> records,
                       std::ostream& out);

}  // namespace splitpriv

#endif  // SPLITPRIV_SPLIT_COST_H_
