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

#include "splitpriv/embedding.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "splitpriv/byte_io.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {
namespace {

constexpr char kEmbeddingTag[] = "EMB0";
constexpr char kPcaTag[] = "PCA0";

struct KindInfo {
  EmbeddingKind kind;
  const char* name;
  bool reduced;
  bool noisy;
  bool siamese;
};

constexpr KindInfo kKinds[] = {
    {EmbeddingKind::kSimple, "simple", false, false, false},
    {EmbeddingKind::kReducedSimple, "reduced-simple", true, false, false},
    {EmbeddingKind::kSiamese, "siamese", false, false, true},
    {EmbeddingKind::kReducedSiamese, "reduced-siamese", true, false, true},
    {EmbeddingKind::kNoisyReducedSimple, "noisy-reduced-simple", true, true,
     false},
    {EmbeddingKind::kAdvanced, "advanced", true, true, true},
};

const KindInfo& Info(EmbeddingKind kind) {
  for (const KindInfo& k : kKinds) {
    if (k.kind == kind) return k;
  }
  return kKinds[0];
}

bool ValidKindTag(std::uint8_t tag) {
  for (const KindInfo& k : kKinds) {
    if (static_cast<std::uint8_t>(k.kind) == tag) return true;
  }
  return false;
}

}  // namespace

const char* EmbeddingKindName(EmbeddingKind kind) { return Info(kind).name; }

absl::StatusOr<EmbeddingKind> ParseEmbeddingKind(const std::string& name) {
  for (const KindInfo& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown embedding kind '", name,
      "' (expected simple, reduced-simple, siamese, reduced-siamese, "
      "noisy-reduced-simple or advanced)"));
}

bool IsReduced(EmbeddingKind kind) { return Info(kind).reduced; }
bool IsNoisy(EmbeddingKind kind) { return Info(kind).noisy; }
bool IsSiamese(EmbeddingKind kind) { return Info(kind).siamese; }

absl::Status EmbeddingConfig::Validate() const {
  const char* name = EmbeddingKindName(kind);
  if (split_index < 1) {
    return absl::OutOfRangeError("split_index must be >= 1");
  }
  if (IsReduced(kind) && (!pca_dim.has_value() || *pca_dim == 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("kind ", name, " needs pca_dim >= 1"));
  }
  if (!IsReduced(kind) && pca_dim.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("kind ", name, " takes no pca_dim"));
  }
  if (IsNoisy(kind)) {
    if (!sigma.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("kind ", name, " needs sigma"));
    }
    if (!std::isfinite(*sigma) || *sigma < 0.0f) {
      return absl::InvalidArgumentError("sigma must be finite and >= 0");
    }
  } else if (sigma.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("kind ", name, " takes no sigma"));
  }
  return absl::OkStatus();
}

absl::StatusOr<FeatureExtractor> FeatureExtractor::Create(
    Network head, std::shared_ptr<const PcaModel> pca,
    std::optional<NoiseModel> noise) {
  const std::size_t d = NumElements(head.ShapeAt(head.num_layers()));
  if (pca != nullptr && pca->dim() != d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PCA expects ", pca->dim(), "-dim features, head produces ", d));
  }
  if (noise.has_value() && pca == nullptr) {
    return absl::InvalidArgumentError("noise is only added after PCA");
  }
  FeatureExtractor fx;
  fx.head_ = std::move(head);
  fx.pca_ = std::move(pca);
  fx.noise_ = std::move(noise);
  return fx;
}

FeatureExtractor::FeatureExtractor(FeatureExtractor&& other) noexcept
    : head_(std::move(other.head_)),
      pca_(std::move(other.pca_)),
      noise_(std::move(other.noise_)),
      next_draw_(other.next_draw_.load()) {}

FeatureExtractor& FeatureExtractor::operator=(
    FeatureExtractor&& other) noexcept {
  head_ = std::move(other.head_);
  pca_ = std::move(other.pca_);
  noise_ = std::move(other.noise_);
  next_draw_.store(other.next_draw_.load());
  return *this;
}

std::size_t FeatureExtractor::output_dim() const {
  if (pca_ != nullptr) return pca_->k();
  return NumElements(head_.ShapeAt(head_.num_layers()));
}

absl::StatusOr<Tensor> FeatureExtractor::ExtractClean(
    const Tensor& images) const {
  SPLITPRIV_ASSIGN_OR_RETURN(
      Tensor f, BoundaryFeatures(head_, images, head_.num_layers()));
  if (pca_ == nullptr) return f;
  return pca_->ReduceBatch(f);
}

Tensor FeatureExtractor::AddNoise(Tensor clean,
                                  std::uint64_t first_draw) const {
  if (!noise_.has_value()) return clean;
  for (std::size_t r = 0; r < clean.dim(0); ++r) {
    noise_->ApplyInPlace(clean.row(r), first_draw + r);
  }
  return clean;
}

absl::StatusOr<Tensor> FeatureExtractor::ExtractAt(
    const Tensor& images, std::uint64_t first_draw) const {
  SPLITPRIV_ASSIGN_OR_RETURN(Tensor clean, ExtractClean(images));
  return AddNoise(std::move(clean), first_draw);
}

absl::StatusOr<Tensor> FeatureExtractor::Extract(const Tensor& images) const {
  SPLITPRIV_RETURN_IF_ERROR(CheckBatchShape(head_, images));
  const std::uint64_t first = next_draw_.fetch_add(images.dim(0));
  return ExtractAt(images, first);
}

absl::StatusOr<Analyzer> Analyzer::Create(std::shared_ptr<const PcaModel> pca,
                                          Network tail) {
  const std::size_t d = NumElements(tail.input_shape());
  if (pca != nullptr && pca->dim() != d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PCA reconstructs ", pca->dim(), "-dim features, tail expects ", d));
  }
  Analyzer a;
  a.pca_ = std::move(pca);
  a.tail_ = std::move(tail);
  return a;
}

std::size_t Analyzer::input_dim() const {
  if (pca_ != nullptr) return pca_->k();
  return NumElements(tail_.input_shape());
}

absl::StatusOr<Tensor> Analyzer::Analyze(const Tensor& features) const {
  if (features.rank() != 2 || features.dim(0) == 0 ||
      features.dim(1) != input_dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("analyzer expects [N, ", input_dim(), "] features, got ",
                     ShapeToString(features.shape())));
  }
  Tensor full = features;
  if (pca_ != nullptr) {
    SPLITPRIV_ASSIGN_OR_RETURN(full, pca_->ReconstructBatch(features));
  }
  Shape shape{features.dim(0)};
  shape.insert(shape.end(), tail_.input_shape().begin(),
               tail_.input_shape().end());
  SPLITPRIV_ASSIGN_OR_RETURN(Tensor x, full.Reshaped(std::move(shape)));
  return ForwardOutput(tail_, x);
}

absl::StatusOr<std::shared_ptr<const PcaModel>> FitBoundaryPca(
    const Network& net, std::size_t split_index, std::uint32_t pca_dim,
    const Tensor& calibration_images) {
  if (split_index < 1 || split_index >= net.num_layers()) {
    return absl::OutOfRangeError(absl::StrCat("split index ", split_index,
                                              " outside [1, ",
                                              net.num_layers() - 1, "]"));
  }
  SPLITPRIV_ASSIGN_OR_RETURN(
      Tensor f, BoundaryFeatures(net, calibration_images, split_index));
  SPLITPRIV_ASSIGN_OR_RETURN(PcaModel pca, FitPca(f, pca_dim));
  return std::make_shared<const PcaModel>(std::move(pca));
}

absl::StatusOr<Embedding> BuildEmbedding(
    const Network& net, const EmbeddingConfig& cfg,
    const Tensor* calibration_images,
    std::shared_ptr<const PcaModel> fitted_pca) {
  SPLITPRIV_RETURN_IF_ERROR(cfg.Validate());
  const char* name = EmbeddingKindName(cfg.kind);
  if (IsSiamese(cfg.kind)) {
    if (net.siamese_split() != cfg.split_index) {
      return absl::FailedPreconditionError(
          absl::StrCat("kind ", name, " at split ", cfg.split_index,
                       " needs a model Siamese fine-tuned at that split"));
    }
  } else if (net.siamese_split().has_value()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "kind ", name, " needs a model that was not Siamese fine-tuned"));
  }
  SPLITPRIV_ASSIGN_OR_RETURN(auto halves, SplitAt(net, cfg.split_index));

  std::shared_ptr<const PcaModel> pca;
  if (IsReduced(cfg.kind)) {
    if (fitted_pca != nullptr) {
      if (fitted_pca->k() != *cfg.pca_dim) {
        return absl::InvalidArgumentError(
            absl::StrCat("fitted PCA has k=", fitted_pca->k(),
                         ", config asks for ", *cfg.pca_dim));
      }
      pca = std::move(fitted_pca);
    } else {
      if (calibration_images == nullptr) {
        return absl::InvalidArgumentError(
            absl::StrCat("kind ", name, " needs calibration data for PCA"));
      }
      SPLITPRIV_ASSIGN_OR_RETURN(
          pca, FitBoundaryPca(net, cfg.split_index, *cfg.pca_dim,
                              *calibration_images));
    }
  }
  std::optional<NoiseModel> noise;
  if (IsNoisy(cfg.kind)) {
    SPLITPRIV_ASSIGN_OR_RETURN(noise,
                               NoiseModel::Create(*cfg.sigma, cfg.noise_seed));
  }
  SPLITPRIV_ASSIGN_OR_RETURN(
      FeatureExtractor fx,
      FeatureExtractor::Create(std::move(halves.first), pca, noise));
  SPLITPRIV_ASSIGN_OR_RETURN(Analyzer an,
                             Analyzer::Create(pca, std::move(halves.second)));
  return Embedding{cfg, std::move(fx), std::move(an)};
}

std::vector<std::uint8_t> SerializeModelFile(const ModelFile& file) {
  ByteWriter out;
  SerializeNetwork(file.net, &out);
  if (file.kind.has_value()) {
    out.Tag(kEmbeddingTag);
    out.U8(static_cast<std::uint8_t>(*file.kind));
    out.U16(static_cast<std::uint16_t>(file.split_index.value_or(0)));
    out.U32(file.pca != nullptr ? static_cast<std::uint32_t>(file.pca->k())
                                : 0u);
  }
  if (file.pca != nullptr) {
    out.Tag(kPcaTag);
    out.U32(static_cast<std::uint32_t>(file.pca->k()));
    out.U32(static_cast<std::uint32_t>(file.pca->dim()));
    out.F32s(file.pca->mean());
    out.F32s(file.pca->components());
  }
  return out.Release();
}

absl::StatusOr<ModelFile> ParseModelFile(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  ModelFile file;
  SPLITPRIV_ASSIGN_OR_RETURN(file.net, ParseNetwork(&in));
  std::uint32_t pca_dim = 0;
  while (!in.done()) {
    SPLITPRIV_ASSIGN_OR_RETURN(std::string tag, in.Tag());
    if (tag == kEmbeddingTag && !file.kind.has_value()) {
      SPLITPRIV_ASSIGN_OR_RETURN(std::uint8_t kind, in.U8());
      if (!ValidKindTag(kind)) {
        return absl::InvalidArgumentError(
            absl::StrCat("EMB0 has unknown embedding kind ", kind));
      }
      SPLITPRIV_ASSIGN_OR_RETURN(std::uint16_t split, in.U16());
      SPLITPRIV_ASSIGN_OR_RETURN(pca_dim, in.U32());
      if (split < 1 || split >= file.net.num_layers()) {
        return absl::InvalidArgumentError(
            absl::StrCat("EMB0 split ", split, " out of range"));
      }
      file.kind = static_cast<EmbeddingKind>(kind);
      file.split_index = split;
    } else if (tag == kPcaTag && file.kind.has_value() && file.pca == nullptr) {
      SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t k, in.U32());
      SPLITPRIV_ASSIGN_OR_RETURN(std::uint32_t d, in.U32());
      if (d != NumElements(file.net.ShapeAt(*file.split_index))) {
        return absl::InvalidArgumentError(absl::StrCat(
            "PCA0 dimension ", d, " does not match split ", *file.split_index));
      }
      if (static_cast<std::uint64_t>(d) * k * 4 > in.remaining()) {
        return absl::OutOfRangeError("truncated PCA0 section");
      }
      SPLITPRIV_ASSIGN_OR_RETURN(std::vector<float> mean, in.F32s(d));
      SPLITPRIV_ASSIGN_OR_RETURN(std::vector<float> comps,
                                 in.F32s(static_cast<std::size_t>(d) * k));
      SPLITPRIV_ASSIGN_OR_RETURN(
          PcaModel pca, PcaModel::Create(std::move(mean), std::move(comps), k));
      file.pca = std::make_shared<const PcaModel>(std::move(pca));
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unexpected section '", tag, "'"));
    }
  }
  if (file.kind.has_value()) {
    const bool reduced = IsReduced(*file.kind);
    if (reduced != (file.pca != nullptr) ||
        (reduced && pca_dim != file.pca->k()) || (!reduced && pca_dim != 0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("EMB0 kind ", EmbeddingKindName(*file.kind),
                       " is inconsistent with the PCA0 section"));
    }
    if (IsSiamese(*file.kind) !=
        (file.net.siamese_split() == file.split_index)) {
      return absl::InvalidArgumentError(
          "EMB0 kind disagrees with the model's Siamese provenance");
    }
  }
  file.hash = ComputeModelHash(bytes);
  return file;
}

absl::Status SaveModelFile(const ModelFile& file,
                           const std::filesystem::path& path) {
  return WriteFileBytes(path, SerializeModelFile(file));
}

absl::StatusOr<ModelFile> LoadModelFile(const std::filesystem::path& path) {
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<std::uint8_t> bytes,
                             ReadFileBytes(path));
  return ParseModelFile(bytes);
}

}  // namespace splitpriv
