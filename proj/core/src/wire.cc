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

#include "splitpriv/wire.h"

#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "splitpriv/byte_io.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {
namespace {

absl::Status WriteAll(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      return absl::UnavailableError(
          absl::StrCat("send failed: ", std::strerror(errno)));
    }
    data += w;
    n -= static_cast<std::size_t>(w);
  }
  return absl::OkStatus();
}

// Returns the number of bytes read before end of stream.
absl::StatusOr<std::size_t> ReadAll(int fd, std::uint8_t* data, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd, data + got, n - got, 0);
    if (r < 0) {
      if (errno == EINTR) continue;
      return absl::UnavailableError(
          absl::StrCat("recv failed: ", std::strerror(errno)));
    }
    if (r == 0) break;
    got += static_cast<std::size_t>(r);
  }
  return got;
}

}  // namespace

bool operator==(const FeatureMessage& a, const FeatureMessage& b) {
  return a.version == b.version && a.model_hash == b.model_hash &&
         a.split_index == b.split_index &&
         a.payload.size() == b.payload.size() &&
         (a.payload.empty() ||
          std::memcmp(a.payload.data(), b.payload.data(),
                      a.payload.size() * sizeof(float)) == 0);
}

std::size_t FeatureMessageBytes(std::size_t dim) {
  return kFeatureHeaderBytes + 4 * dim;
}

std::vector<std::uint8_t> EncodeFeatureMessage(const FeatureMessage& msg) {
  ByteWriter out;
  out.U8(msg.version);
  out.Bytes(msg.model_hash);
  out.U16(msg.split_index);
  out.U32(static_cast<std::uint32_t>(msg.payload.size()));
  out.F32s(msg.payload);
  return out.Release();
}

absl::StatusOr<FeatureMessage> DecodeFeatureMessage(
    std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 1) {
    return absl::OutOfRangeError("truncated feature message: empty");
  }
  FeatureMessage msg;
  msg.version = bytes[0];
  if (msg.version != kWireVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported version ", msg.version));
  }
  if (bytes.size() < kFeatureHeaderBytes) {
    return absl::OutOfRangeError(
        absl::StrCat("truncated feature message: ", bytes.size(), " of ",
                     kFeatureHeaderBytes, " header bytes"));
  }
  ByteReader in(bytes.subspan(1));
  SPLITPRIV_ASSIGN_OR_RETURN(auto hash, in.Bytes(8));
  std::copy(hash.begin(), hash.end(), msg.model_hash.begin());
  SPLITPRIV_ASSIGN_OR_RETURN(msg.split_index, in.U16());
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t dim, in.U32());
  if (dim > kMaxWireDim) {
    return absl::InvalidArgumentError(
        absl::StrCat("dim ", dim, " exceeds the limit of ", kMaxWireDim));
  }
  const std::size_t want = 4 * static_cast<std::size_t>(dim);
  if (in.remaining() < want) {
    return absl::OutOfRangeError(absl::StrCat(
        "truncated feature payload: ", in.remaining(), " of ", want, " bytes"));
  }
  if (in.remaining() > want) {
    return absl::InvalidArgumentError(
        absl::StrCat("trailing bytes after payload: ", in.remaining() - want));
  }
  SPLITPRIV_ASSIGN_OR_RETURN(msg.payload, in.F32s(dim));
  return msg;
}

std::vector<std::uint8_t> EncodeReply(const Reply& reply) {
  ByteWriter out;
  if (const auto* err = std::get_if<ErrorReply>(&reply)) {
    out.U32(err->code);
  } else {
    const auto& result = std::get<ResultReply>(reply);
    out.U16(static_cast<std::uint16_t>(result.probabilities.size()));
    out.F32s(result.probabilities);
  }
  return out.Release();
}

absl::StatusOr<Reply> DecodeReply(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  if (bytes.size() == 4) {
    SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t code, in.U32());
    return ErrorReply{code};
  }
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint16_t count, in.U16());
  if (in.remaining() != 4 * static_cast<std::size_t>(count)) {
    return absl::InvalidArgumentError(
        absl::StrCat("result frame declares ", count, " classes but carries ",
                     in.remaining(), " payload bytes"));
  }
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<float> probs, in.F32s(count));
  return ResultReply{std::move(probs)};
}

absl::Status WriteFrame(int fd, std::span<const std::uint8_t> frame) {
  if (frame.size() > kMaxFrameBytes) {
    return absl::InvalidArgumentError("frame too large");
  }
  ByteWriter len;
  len.U32(static_cast<std::uint32_t>(frame.size()));
  SPLITPRIV_RETURN_IF_ERROR(WriteAll(fd, len.bytes().data(), 4));
  return WriteAll(fd, frame.data(), frame.size());
}

absl::StatusOr<std::vector<std::uint8_t>> ReadFrame(int fd) {
  std::uint8_t len_bytes[4];
  SPLITPRIV_ASSIGN_OR_RETURN(std::size_t got, ReadAll(fd, len_bytes, 4));
  if (got == 0) return absl::NotFoundError("end of stream");
  if (got < 4) return absl::OutOfRangeError("truncated frame length");
  ByteReader lr(len_bytes);
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t len, lr.U32());
  if (len > kMaxFrameBytes) {
    return absl::InvalidArgumentError(
        absl::StrCat("frame length ", len, " exceeds the limit"));
  }
  std::vector<std::uint8_t> frame(len);
  SPLITPRIV_ASSIGN_OR_RETURN(got, ReadAll(fd, frame.data(), len));
  if (got < len) return absl::OutOfRangeError("truncated frame");
  return frame;
}

}  // namespace splitpriv
