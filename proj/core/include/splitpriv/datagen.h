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

#ifndef SPLITPRIV_DATAGEN_H_
#define SPLITPRIV_DATAGEN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

inline constexpr std::size_t kImageSide = 16;
inline constexpr std::size_t kImagePixels = kImageSide * kImageSide;

// Synthetic corpus: every identity (sensitive class) owns a fixed random
// texture and belongs to primary class identity % P, which contributes an
// orientation-coded stripe overlay.
struct DatasetSpec {
  std::uint32_t primary_classes = 2;
  std::uint32_t sensitive_classes = 20;
  std::uint32_t samples_per_identity = 30;
  float noise_std = 0.05f;
  std::uint64_t seed = 7;

  absl::Status Validate() const;
};

struct LabeledSample {
  Tensor image;  // [16, 16, 1], values in [0, 1]
  std::uint16_t primary = 0;
  std::uint16_t sensitive = 0;
};

// Struct-of-arrays sample collection; images is [N, 16, 16, 1].
struct Dataset {
  std::uint32_t primary_classes = 0;
  std::uint32_t sensitive_classes = 0;
  Tensor images;
  std::vector<std::uint16_t> primary;
  std::vector<std::uint16_t> sensitive;

  std::size_t size() const { return primary.size(); }
  LabeledSample sample(std::size_t i) const;
  // Copies the selected samples into a new dataset.
  Dataset Subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SplitDataset {
  Dataset train;
  Dataset test;
};

// 80/20 split per identity (at least one test sample each). Fully determined
// by spec.seed.
absl::StatusOr<SplitDataset> Generate(const DatasetSpec& spec);

struct SamplePair {
  std::size_t a = 0;  // row indices into the dataset
  std::size_t b = 0;
  bool similar = false;
};

// ceil(count/2) similar pairs (same primary, different identity) and
// floor(count/2) dissimilar pairs (different primary), alternating,
// each drawn uniformly from the ordered pairs meeting its constraint.
absl::StatusOr<std::vector<SamplePair>> SamplePairs(const Dataset& data,
                                                    std::size_t count,
                                                    std::uint64_t seed);

// "SPDS" | u32 primary classes | u32 sensitive classes | u32 train count |
// u32 test count | per sample (train then test): u16 primary, u16 sensitive,
// 256 f32 pixels.
std::vector<std::uint8_t> SerializeDataset(const SplitDataset& data);
absl::StatusOr<SplitDataset> ParseDataset(std::span<const std::uint8_t> bytes);
absl::Status SaveDataset(const SplitDataset& data,
                         const std::filesystem::path& path);
absl::StatusOr<SplitDataset> LoadDataset(const std::filesystem::path& path);

}  // namespace splitpriv

#endif  // SPLITPRIV_DATAGEN_H_
