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

// "SPNN" model container.
//
//   "SPNN" | u8 version (1) | u16 layer count
//   per layer: u8 kind tag | kind parameters as u32 |
//              weight tensors as (u8 rank, u32 dims..., f32 data...)
//   "INPT" | u8 rank | u32 dims...      per-sample input shape
//   ["SIAM" | u16 split]                Siamese fine-tuning provenance
//   [further sections owned by higher layers, e.g. "EMB0", "PCA0"]
//
// All integers and floats are little-endian.

#ifndef SPLITPRIV_MODEL_IO_H_
#define SPLITPRIV_MODEL_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "splitpriv/byte_io.h"
#include "splitpriv/network.h"

namespace splitpriv {

inline constexpr char kModelMagic[] = "SPNN";
inline constexpr std::uint8_t kModelVersion = 1;

// Appends the network (header, layers, INPT and SIAM sections).
void SerializeNetwork(const Network& net, ByteWriter* out);

// Parses a network from the reader, leaving it positioned at the first
// section the network layer does not own.
//
// Errors: DataLoss "bad magic", FailedPrecondition "unsupported model
// version", OutOfRange "truncated", InvalidArgument for inconsistent shapes.
absl::StatusOr<Network> ParseNetwork(ByteReader* in);

absl::Status SaveModel(const Network& net, const std::filesystem::path& path);
// Rejects files that carry sections beyond the network itself.
absl::StatusOr<Network> LoadModel(const std::filesystem::path& path);

using ModelHash = std::array<std::uint8_t, 8>;

// First 8 bytes of the SHA-256 digest of a model file's bytes.
ModelHash ComputeModelHash(std::span<const std::uint8_t> file_bytes);

}  // namespace splitpriv

#endif  // SPLITPRIV_MODEL_IO_H_
