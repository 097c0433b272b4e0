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

#include "splitpriv/datagen.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "splitpriv/byte_io.h"
#include "splitpriv/rng.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {
namespace {

constexpr float kTextureAmplitude = 0.5f;
constexpr float kOverlayAmplitude = 0.5f;
constexpr double kStripePeriod = 4.0;
constexpr char kDatasetMagic[] = "SPDS";

// Stripes at angle pi * p / P; cos-profile in [0, 1].
std::vector<float> StripeOverlay(std::uint32_t p, std::uint32_t num_classes) {
  const double angle = std::numbers::pi * static_cast<double>(p) /
                       static_cast<double>(num_classes);
  const double cx = std::cos(angle), cy = std::sin(angle);
  std::vector<float> overlay(kImagePixels);
  for (std::size_t y = 0; y < kImageSide; ++y) {
    for (std::size_t x = 0; x < kImageSide; ++x) {
      const double phase =
          2.0 * std::numbers::pi *
          (static_cast<double>(x) * cx + static_cast<double>(y) * cy) /
          kStripePeriod;
      overlay[y * kImageSide + x] =
          static_cast<float>(0.5 * (1.0 + std::cos(phase)));
    }
  }
  return overlay;
}

void AppendSample(Dataset* d, std::span<const float> pixels,
                  std::uint16_t primary, std::uint16_t sensitive) {
  auto& store = d->images.storage();
  store.insert(store.end(), pixels.begin(), pixels.end());
  d->primary.push_back(primary);
  d->sensitive.push_back(sensitive);
}

void FinishImages(Dataset* d) {
  d->images = Tensor(Shape{d->size(), kImageSide, kImageSide, 1},
                     std::move(d->images.storage()));
}

}  // namespace

absl::Status DatasetSpec::Validate() const {
  if (primary_classes < 2) {
    return absl::InvalidArgumentError("primary_classes must be >= 2");
  }
  if (sensitive_classes < primary_classes) {
    return absl::InvalidArgumentError(
        "sensitive_classes must be >= primary_classes");
  }
  if (sensitive_classes % primary_classes != 0) {
    return absl::InvalidArgumentError(
        "sensitive_classes must be divisible by primary_classes");
  }
  if (sensitive_classes > 65535) {
    return absl::InvalidArgumentError("sensitive_classes must fit in u16");
  }
  if (samples_per_identity < 2) {
    return absl::InvalidArgumentError("samples_per_identity must be >= 2");
  }
  if (!(noise_std >= 0.0f) || !std::isfinite(noise_std)) {
    return absl::InvalidArgumentError("noise_std must be finite and >= 0");
  }
  return absl::OkStatus();
}

LabeledSample Dataset::sample(std::size_t i) const {
  auto px = images.row(i);
  return LabeledSample{Tensor(Shape{kImageSide, kImageSide, 1},
                              std::vector<float>(px.begin(), px.end())),
                       primary[i], sensitive[i]};
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.primary_classes = primary_classes;
  out.sensitive_classes = sensitive_classes;
  out.images = GatherRows(images, rows);
  for (std::size_t r : rows) {
    out.primary.push_back(primary[r]);
    out.sensitive.push_back(sensitive[r]);
  }
  return out;
}

absl::StatusOr<SplitDataset> Generate(const DatasetSpec& spec) {
  SPLITPRIV_RETURN_IF_ERROR(spec.Validate());
  const std::uint32_t n = spec.samples_per_identity;
  const std::uint32_t n_test = std::max<std::uint32_t>(1, n / 5);
  const std::uint32_t n_train = n - n_test;

  std::vector<std::vector<float>> overlays;
  for (std::uint32_t p = 0; p < spec.primary_classes; ++p) {
    overlays.push_back(StripeOverlay(p, spec.primary_classes));
  }
  Rng texture_rng(DeriveSeed(spec.seed, 1));
  Rng noise_rng(DeriveSeed(spec.seed, 2));

  SplitDataset out;
  for (Dataset* d : {&out.train, &out.test}) {
    d->primary_classes = spec.primary_classes;
    d->sensitive_classes = spec.sensitive_classes;
  }
  std::vector<float> texture(kImagePixels);
  std::vector<float> pixels(kImagePixels);
  for (std::uint32_t t = 0; t < spec.sensitive_classes; ++t) {
    for (float& v : texture) v = static_cast<float>(texture_rng.Uniform());
    const auto primary = static_cast<std::uint16_t>(t % spec.primary_classes);
    const auto& overlay = overlays[primary];
    for (std::uint32_t s = 0; s < n; ++s) {
      for (std::size_t k = 0; k < kImagePixels; ++k) {
        float v =
            kTextureAmplitude * texture[k] + kOverlayAmplitude * overlay[k];
        if (spec.noise_std > 0.0f) {
          v += static_cast<float>(spec.noise_std * noise_rng.Normal());
        }
        pixels[k] = std::clamp(v, 0.0f, 1.0f);
      }
      AppendSample(s < n_train ? &out.train : &out.test, pixels, primary,
                   static_cast<std::uint16_t>(t));
    }
  }
  FinishImages(&out.train);
  FinishImages(&out.test);
  return out;
}

absl::StatusOr<std::vector<SamplePair>> SamplePairs(const Dataset& data,
                                                    std::size_t count,
                                                    std::uint64_t seed) {
  const std::size_t n = data.size();
  // For each anchor, the number of valid partners under each constraint.
  std::vector<std::size_t> same_primary(data.primary_classes, 0);
  std::vector<std::size_t> same_identity(data.sensitive_classes, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++same_primary[data.primary[i]];
    ++same_identity[data.sensitive[i]];
  }
  std::vector<std::size_t> similar_w(n), dissimilar_w(n);
  std::size_t similar_total = 0, dissimilar_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    similar_w[i] =
        same_primary[data.primary[i]] - same_identity[data.sensitive[i]];
    dissimilar_w[i] = n - same_primary[data.primary[i]];
    similar_total += similar_w[i];
    dissimilar_total += dissimilar_w[i];
  }
  const std::size_t want_similar = (count + 1) / 2;
  const std::size_t want_dissimilar = count / 2;
  if (want_similar > 0 && similar_total == 0) {
    return absl::FailedPreconditionError(
        "unsatisfiable: no primary class has two distinct identities");
  }
  if (want_dissimilar > 0 && dissimilar_total == 0) {
    return absl::FailedPreconditionError(
        "unsatisfiable: data covers a single primary class");
  }

  Rng rng(seed);
  auto draw = [&](bool similar) {
    const auto& w = similar ? similar_w : dissimilar_w;
    std::size_t r =
        rng.UniformIndex(similar ? similar_total : dissimilar_total);
    std::size_t a = 0;
    while (r >= w[a]) r -= w[a++];
    std::size_t partner = r;
    for (std::size_t b = 0; b < n; ++b) {
      const bool ok = similar ? (data.primary[b] == data.primary[a] &&
                                 data.sensitive[b] != data.sensitive[a])
                              : data.primary[b] != data.primary[a];
      if (!ok) continue;
      if (partner == 0) return SamplePair{a, b, similar};
      --partner;
    }
    return SamplePair{a, a, similar};  // unreachable: weights count partners
  };

  std::vector<SamplePair> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pairs.push_back(draw(i % 2 == 0));
  return pairs;
}

std::vector<std::uint8_t> SerializeDataset(const SplitDataset& data) {
  ByteWriter out;
  out.Tag(kDatasetMagic);
  out.U32(data.train.primary_classes);
  out.U32(data.train.sensitive_classes);
  out.U32(static_cast<std::uint32_t>(data.train.size()));
  out.U32(static_cast<std::uint32_t>(data.test.size()));
  for (const Dataset* d : {&data.train, &data.test}) {
    for (std::size_t i = 0; i < d->size(); ++i) {
      out.U16(d->primary[i]);
      out.U16(d->sensitive[i]);
      out.F32s(d->images.row(i));
    }
  }
  return out.Release();
}

absl::StatusOr<SplitDataset> ParseDataset(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  auto magic = in.Tag();
  if (!magic.ok() || *magic != kDatasetMagic) {
    return absl::DataLossError("bad magic: not an SPDS dataset file");
  }
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t p, in.U32());
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t t, in.U32());
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t n_train, in.U32());
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t n_test, in.U32());
  if (p < 2 || t < p) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid class counts P=", p, " T=", t));
  }
  SplitDataset out;
  for (auto [d, count] :
       {std::pair{&out.train, n_train}, std::pair{&out.test, n_test}}) {
    d->primary_classes = p;
    d->sensitive_classes = t;
    for (std::uint32_t i = 0; i < count; ++i) {
      SPLITPRIV_ASSIGN_OR_RETURN(std::uint16_t primary, in.U16());
      SPLITPRIV_ASSIGN_OR_RETURN(std::uint16_t sensitive, in.U16());
      SPLITPRIV_ASSIGN_OR_RETURN(std::vector<float> px, in.F32s(kImagePixels));
      if (primary >= p || sensitive >= t) {
        return absl::InvalidArgumentError(
            absl::StrCat("sample ", i, " has out-of-range labels"));
      }
      AppendSample(d, px, primary, sensitive);
    }
    FinishImages(d);
  }
  if (!in.done()) {
    return absl::InvalidArgumentError("trailing bytes after dataset");
  }
  return out;
}

absl::Status SaveDataset(const SplitDataset& data,
                         const std::filesystem::path& path) {
  return WriteFileBytes(path, SerializeDataset(data));
}

absl::StatusOr<SplitDataset> LoadDataset(const std::filesystem::path& path) {
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<std::uint8_t> bytes,
                             ReadFileBytes(path));
  return ParseDataset(bytes);
}

}  // namespace splitpriv
