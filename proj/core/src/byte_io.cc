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
#include "splitpriv/byte_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "absl/strings/str_cat.h"

namespace splitpriv {

static_assert(std::endian::native == std::endian::little,
              "byte_io assumes a little-endian host");

void ByteWriter::U16(std::uint16_t v) {
  U8(static_cast<std::uint8_t>(v));
  U8(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::U32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::U64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::F32s(std::span<const float> values) {
  const std::size_t offset = bytes_.size();
  bytes_.resize(offset + values.size() * sizeof(float));
  if (!values.empty()) {
    std::memcpy(bytes_.data() + offset, values.data(),
                values.size() * sizeof(float));
  }
}

void ByteWriter::Bytes(std::span<const std::uint8_t> b) {
  bytes_.insert(bytes_.end(), b.begin(), b.end());
}

void ByteWriter::Tag(std::string_view four_cc) {
  for (char c : four_cc) U8(static_cast<std::uint8_t>(c));
}

absl::Status ByteReader::Need(std::size_t n) const {
  if (remaining() < n) {
    return absl::OutOfRangeError(absl::StrCat("truncated: need ", n,
                                              " bytes at offset ", pos_,
                                              ", have ", remaining()));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::uint8_t> ByteReader::U8() {
  if (auto s = Need(1); !s.ok()) return s;
  return bytes_[pos_++];
}

absl::StatusOr<std::uint16_t> ByteReader::U16() {
  if (auto s = Need(2); !s.ok()) return s;
  std::uint16_t v =
      static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

absl::StatusOr<std::uint32_t> ByteReader::U32() {
  if (auto s = Need(4); !s.ok()) return s;
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
  }
  pos_ += 4;
  return v;
}

absl::StatusOr<std::uint64_t> ByteReader::U64() {
  if (auto s = Need(8); !s.ok()) return s;
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
  }
  pos_ += 8;
  return v;
}

absl::StatusOr<float> ByteReader::F32() {
  auto bits = U32();
  if (!bits.ok()) return bits.status();
  return std::bit_cast<float>(*bits);
}

absl::StatusOr<std::vector<float>> ByteReader::F32s(std::size_t count) {
  if (count > remaining() / sizeof(float)) {
    return absl::OutOfRangeError(
        absl::StrCat("truncated: need ", count, " floats at offset ", pos_,
                     ", have ", remaining(), " bytes"));
  }
  std::vector<float> out(count);
  if (count > 0) {
    std::memcpy(out.data(), bytes_.data() + pos_, count * sizeof(float));
  }
  pos_ += count * sizeof(float);
  return out;
}

absl::StatusOr<std::span<const std::uint8_t>> ByteReader::Bytes(
    std::size_t count) {
  if (auto s = Need(count); !s.ok()) return s;
  auto out = bytes_.subspan(pos_, count);
  pos_ += count;
  return out;
}

absl::StatusOr<std::string> ByteReader::Tag() {
  auto b = Bytes(4);
  if (!b.ok()) return b.status();
  return std::string(b->begin(), b->end());
}

absl::StatusOr<std::vector<std::uint8_t>> ReadFileBytes(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open ", path.string(), " for reading"));
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

absl::Status WriteFileBytes(const std::filesystem::path& path,
                            std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot open ", path.string(), " for writing"));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    return absl::DataLossError(absl::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

absl::Status WriteTextFile(const std::filesystem::path& path,
                           std::string_view text) {
  return WriteFileBytes(
      path,
      std::span<const std::uint8_t>(
          reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace splitpriv
