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

// Client/server framing. Every frame travels as u32 LE length, then the
// frame bytes. Request frames hold one encoded FeatureMessage:
//
//   u8 version (1) | u8 model_hash[8] | u16 split_index | u32 dim |
//   f32 payload[dim]
//
// Reply frames are either a result (u16 class count, f32 probabilities) or
// an error (u32 code). A result frame is never 4 bytes long, so the two are
// told apart by length.

#ifndef SPLITPRIV_WIRE_H_
#define SPLITPRIV_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "splitpriv/model_io.h"

namespace splitpriv {

inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 1 + 8 + 2 + 4;
inline constexpr std::uint32_t kMaxWireDim = std::uint32_t{1} << 24;
inline constexpr std::uint32_t kMaxFrameBytes = 4 * kMaxWireDim + 64;

enum class WireError : std::uint32_t {
  kHashMismatch = 1,
  kDecodeFailure = 2,
  kInternal = 3,
};

struct FeatureMessage {
  std::uint8_t version = kWireVersion;
  ModelHash model_hash{};
  std::uint16_t split_index = 0;
  std::vector<float> payload;

  // Bitwise payload comparison, so NaN payloads round-trip as equal.
  friend bool operator==(const FeatureMessage& a, const FeatureMessage& b);
};

std::vector<std::uint8_t> EncodeFeatureMessage(const FeatureMessage& msg);

// Errors (all InvalidArgument or OutOfRange):
//   "truncated ..."           buffer shorter than header or payload
//   "unsupported version N"
//   "dim N exceeds ..."       dim above kMaxWireDim
//   "trailing bytes ..."      buffer longer than the declared payload
absl::StatusOr<FeatureMessage> DecodeFeatureMessage(
    std::span<const std::uint8_t> bytes);

std::size_t FeatureMessageBytes(std::size_t dim);

struct ResultReply {
  std::vector<float> probabilities;
  friend bool operator==(const ResultReply&, const ResultReply&) = default;
};

struct ErrorReply {
  std::uint32_t code = 0;
  friend bool operator==(const ErrorReply&, const ErrorReply&) = default;
};

using Reply = std::variant<ResultReply, ErrorReply>;

std::vector<std::uint8_t> EncodeReply(const Reply& reply);
absl::StatusOr<Reply> DecodeReply(std::span<const std::uint8_t> bytes);

// Blocking framed I/O on a connected stream socket. ReadFrame returns
// NotFound on a clean end of stream before any length byte.
absl::Status WriteFrame(int fd, std::span<const std::uint8_t> frame);
absl::StatusOr<std::vector<std::uint8_t>> ReadFrame(int fd);

}  // namespace splitpriv

#endif  // SPLITPRIV_WIRE_H_
