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

#include "splitpriv/split_cost.h"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "splitpriv/status_macros.h"
#include "splitpriv/wire.h"

namespace splitpriv {
namespace {

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename Fn>
absl::StatusOr<double> MedianMicros(std::size_t runs, Fn&& fn) {
  std::vector<double> times;
  times.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    const auto start = std::chrono::steady_clock::now();
    SPLITPRIV_RETURN_IF_ERROR(fn());
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(
        std::chrono::duration<double, std::micro>(stop - start).count());
  }
  return Median(std::move(times));
}

}  // namespace

std::vector<std::uint64_t> LayerFlops(const Network& net) {
  std::vector<std::uint64_t> flops;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    flops.push_back(net.layers()[l].FlopsPerSample(net.ShapeAt(l)));
  }
  return flops;
}

std::size_t ReducedDim(std::uint32_t pca_dim, std::size_t dim) {
  if (dim <= 1) return dim;
  return std::min<std::size_t>(pca_dim, dim - 1);
}

absl::StatusOr<std::vector<SplitCostRecord>> BenchSplits(
    const Network& net, const Tensor& batch, const BenchConfig& cfg) {
  SPLITPRIV_RETURN_IF_ERROR(CheckBatchShape(net, batch));
  if (cfg.runs < 30) {
    return absl::InvalidArgumentError("bench needs at least 30 runs");
  }
  std::vector<std::size_t> splits = cfg.splits;
  if (splits.empty()) {
    splits.resize(net.num_layers() - 1);
    std::iota(splits.begin(), splits.end(), std::size_t{1});
  }
  const std::vector<std::uint64_t> flops = LayerFlops(net);
  const std::uint64_t total =
      std::accumulate(flops.begin(), flops.end(), std::uint64_t{0});

  std::vector<SplitCostRecord> records;
  for (std::size_t i : splits) {
    SPLITPRIV_ASSIGN_OR_RETURN(auto halves, SplitAt(net, i));
    SplitCostRecord rec;
    rec.split_index = i;
    rec.client_flops =
        std::accumulate(flops.begin(), flops.begin() + i, std::uint64_t{0});
    rec.server_flops = total - rec.client_flops;
    const std::size_t dim = NumElements(net.ShapeAt(i));
    rec.payload_bytes = FeatureMessageBytes(dim);
    rec.reduced_payload_bytes =
        FeatureMessageBytes(ReducedDim(cfg.pca_dim, dim));

    Tensor mid;
    SPLITPRIV_ASSIGN_OR_RETURN(
        rec.client_wall_time_us, MedianMicros(cfg.runs, [&]() -> absl::Status {
          SPLITPRIV_ASSIGN_OR_RETURN(mid, ForwardOutput(halves.first, batch));
          return absl::OkStatus();
        }));
    SPLITPRIV_ASSIGN_OR_RETURN(
        rec.server_wall_time_us, MedianMicros(cfg.runs, [&]() -> absl::Status {
          return ForwardOutput(halves.second, mid).status();
        }));
    records.push_back(rec);
  }
  return records;
}

void WriteSplitCostCsv(std::span<const SplitCostRecord> records,
                       std::ostream& out) {
  out << "split_index,client_flops,server_flops,payload_bytes,"
         "reduced_payload_bytes,client_wall_time_us,server_wall_time_us\n";
  for (const SplitCostRecord& r : records) {
    out << absl::StrFormat("%d,%d,%d,%d,%d,%.6g,%.6g\n", r.split_index,
                           r.client_flops, r.server_flops, r.payload_bytes,
                           r.reduced_payload_bytes, r.client_wall_time_us,
                           r.server_wall_time_us);
  }
}

}  // namespace splitpriv
