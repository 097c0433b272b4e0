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

#ifndef SPLITPRIV_BYTE_IO_H_
#define SPLITPRIV_BYTE_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace splitpriv {

// Little-endian writer for the binary file and wire formats.
class ByteWriter {
 public:
  void U8(std::uint8_t v) { bytes_.push_back(v); }
  void U16(std::uint16_t v);
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  void F32(float v);
  void F32s(std::span<const float> values);
  void Bytes(std::span<const std::uint8_t> b);
  void Tag(std::string_view four_cc);

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> Release() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

// Bounds-checked little-endian reader. Every read past the end yields an
// OutOfRange status whose message starts with "truncated".
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  absl::StatusOr<std::uint8_t> U8();
  absl::StatusOr<std::uint16_t> U16();
  absl::StatusOr<std::uint32_t> U32();
  absl::StatusOr<std::uint64_t> U64();
  absl::StatusOr<float> F32();
  absl::StatusOr<std::vector<float>> F32s(std::size_t count);
  absl::StatusOr<std::span<const std::uint8_t>> Bytes(std::size_t count);
  absl::StatusOr<std::string> Tag();

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  absl::Status Need(std::size_t n) const;

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

absl::StatusOr<std::vector<std::uint8_t>> ReadFileBytes(
    const std::filesystem::path& path);
absl::Status WriteFileBytes(const std::filesystem::path& path,
                            std::span<const std::uint8_t> bytes);
absl::Status WriteTextFile(const std::filesystem::path& path,
                           std::string_view text);

}  // namespace splitpriv

#endif  // SPLITPRIV_BYTE_IO_H_
