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

#include "splitpriv/model_io.h"

#include <openssl/sha.h>

#include <limits>
#include <string>

#include "absl/strings/str_cat.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {
namespace {

constexpr char kInputTag[] = "INPT";
constexpr char kSiameseTag[] = "SIAM";

void WriteTensor(const Tensor& t, ByteWriter* out) {
  out->U8(static_cast<std::uint8_t>(t.rank()));
  for (std::size_t d : t.shape()) out->U32(static_cast<std::uint32_t>(d));
  out->F32s(t.data());
}

absl::StatusOr<Tensor> ReadTensor(ByteReader* in) {
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint8_t rank, in->U8());
  Shape shape;
  std::uint64_t count = 1;
  for (std::uint8_t r = 0; r < rank; ++r) {
    SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t d, in->U32());
    shape.push_back(d);
    count *= d;
    if (count > std::numeric_limits<std::uint32_t>::max()) {
      return absl::InvalidArgumentError("tensor element count overflows");
    }
  }
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<float> data, in->F32s(count));
  return Tensor::Create(std::move(shape), std::move(data));
}

absl::StatusOr<Shape> ReadShape(ByteReader* in) {
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint8_t rank, in->U8());
  Shape shape;
  for (std::uint8_t r = 0; r < rank; ++r) {
    SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t d, in->U32());
    shape.push_back(d);
  }
  return shape;
}

}  // namespace

void SerializeNetwork(const Network& net, ByteWriter* out) {
  out->Tag(kModelMagic);
  out->U8(kModelVersion);
  out->U16(static_cast<std::uint16_t>(net.num_layers()));
  for (const Layer& layer : net.layers()) {
    out->U8(static_cast<std::uint8_t>(layer.kind()));
    for (std::uint32_t p : layer.EncodedParams()) out->U32(p);
    for (const Tensor& w : layer.weights()) WriteTensor(w, out);
  }
  out->Tag(kInputTag);
  out->U8(static_cast<std::uint8_t>(net.input_shape().size()));
  for (std::size_t d : net.input_shape()) {
    out->U32(static_cast<std::uint32_t>(d));
  }
  if (net.siamese_split().has_value()) {
    out->Tag(kSiameseTag);
    out->U16(static_cast<std::uint16_t>(*net.siamese_split()));
  }
}

absl::StatusOr<Network> ParseNetwork(ByteReader* in) {
  auto magic = in->Tag();
  if (!magic.ok() || *magic != kModelMagic) {
    return absl::DataLossError("bad magic: not an SPNN model file");
  }
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint8_t version, in->U8());
  if (version != kModelVersion) {
    return absl::FailedPreconditionError(
        absl::StrCat("unsupported model version ", version, " (expected ",
                     kModelVersion, ")"));
  }
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint16_t count, in->U16());
  std::vector<Layer> layers;
  layers.reserve(count);
  for (std::uint16_t l = 0; l < count; ++l) {
    SPLITPRIV_ASSIGN_OR_RETURN(std::uint8_t tag, in->U8());
    if (tag < 1 || tag > 6) {
      return absl::InvalidArgumentError(
          absl::StrCat("layer ", l, " has unknown kind tag ", tag));
    }
    const auto kind = static_cast<LayerKind>(tag);
    std::vector<std::uint32_t> params(Layer::EncodedParamCount(kind));
    for (auto& p : params) {
      SPLITPRIV_ASSIGN_OR_RETURN(p, in->U32());
    }
    SPLITPRIV_ASSIGN_OR_RETURN(Layer layer, Layer::FromEncoded(kind, params));
    if (layer.has_weights()) {
      for (int w = 0; w < 2; ++w) {
        SPLITPRIV_ASSIGN_OR_RETURN(Tensor t, ReadTensor(in));
        layer.weights().push_back(std::move(t));
      }
    }
    layers.push_back(std::move(layer));
  }
  SPLITPRIV_ASSIGN_OR_RETURN(std::string tag, in->Tag());
  if (tag != kInputTag) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected INPT section, found '", tag, "'"));
  }
  SPLITPRIV_ASSIGN_OR_RETURN(Shape input_shape, ReadShape(in));
  SPLITPRIV_ASSIGN_OR_RETURN(
      Network net, Network::Create(std::move(input_shape), std::move(layers)));

  if (in->remaining() >= 4) {
    ByteReader peek = *in;
    SPLITPRIV_ASSIGN_OR_RETURN(std::string next, peek.Tag());
    if (next == kSiameseTag) {
      *in = peek;
      SPLITPRIV_ASSIGN_OR_RETURN(std::uint16_t split, in->U16());
      if (split < 1 || split >= net.num_layers()) {
        return absl::InvalidArgumentError(
            absl::StrCat("SIAM split ", split, " out of range"));
      }
      net.set_siamese_split(split);
    }
  }
  return net;
}

absl::Status SaveModel(const Network& net, const std::filesystem::path& path) {
  ByteWriter out;
  SerializeNetwork(net, &out);
  return WriteFileBytes(path, out.bytes());
}

absl::StatusOr<Network> LoadModel(const std::filesystem::path& path) {
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<std::uint8_t> bytes,
                             ReadFileBytes(path));
  ByteReader in(bytes);
  SPLITPRIV_ASSIGN_OR_RETURN(Network net, ParseNetwork(&in));
  if (!in.done()) {
    return absl::InvalidArgumentError(absl::StrCat(
        path.string(), " carries ", in.remaining(),
        " bytes of embedding sections; load it as an embedding model file"));
  }
  return net;
}

ModelHash ComputeModelHash(std::span<const std::uint8_t> file_bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(file_bytes.data(), file_bytes.size(), digest);
  ModelHash hash;
  std::copy(digest, digest + hash.size(), hash.begin());
  return hash;
}

}  // namespace splitpriv
