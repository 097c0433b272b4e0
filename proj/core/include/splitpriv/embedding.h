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

#ifndef SPLITPRIV_EMBEDDING_H_
#define SPLITPRIV_EMBEDDING_H_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "splitpriv/datagen.h"
#include "splitpriv/model_io.h"
#include "splitpriv/network.h"
#include "splitpriv/noise.h"
#include "splitpriv/pca.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

enum class EmbeddingKind : std::uint8_t {
  kSimple = 1,
  kReducedSimple = 2,
  kSiamese = 3,
  kReducedSiamese = 4,
  kNoisyReducedSimple = 5,
  kAdvanced = 6,  // noisy reduced Siamese
};

const char* EmbeddingKindName(EmbeddingKind kind);
absl::StatusOr<EmbeddingKind> ParseEmbeddingKind(const std::string& name);
bool IsReduced(EmbeddingKind kind);
bool IsNoisy(EmbeddingKind kind);
bool IsSiamese(EmbeddingKind kind);

struct EmbeddingConfig {
  EmbeddingKind kind = EmbeddingKind::kSimple;
  std::size_t split_index = 9;
  std::optional<std::uint32_t> pca_dim;  // reduced and noisy kinds only
  std::optional<float> sigma;            // noisy kinds only
  std::uint64_t noise_seed = 7;

  // Field presence must match the kind.
  absl::Status Validate() const;
};

// Client half: head network, then optional PCA reduction, then optional
// noise. Output rows are flat feature vectors.
class FeatureExtractor {
 public:
  static absl::StatusOr<FeatureExtractor> Create(
      Network head, std::shared_ptr<const PcaModel> pca,
      std::optional<NoiseModel> noise);

  FeatureExtractor(FeatureExtractor&& other) noexcept;
  FeatureExtractor& operator=(FeatureExtractor&& other) noexcept;

  const Network& head() const { return head_; }
  const std::shared_ptr<const PcaModel>& pca() const { return pca_; }
  const std::optional<NoiseModel>& noise() const { return noise_; }
  std::size_t output_dim() const;

  // Head (and PCA) without noise: [N, output_dim].
  absl::StatusOr<Tensor> ExtractClean(const Tensor& images) const;
  // Row r uses noise draw first_draw + r.
  absl::StatusOr<Tensor> ExtractAt(const Tensor& images,
                                   std::uint64_t first_draw) const;
  // Draw indices come from an internal counter, advanced atomically by the
  // batch size, so concurrent callers never share a draw.
  absl::StatusOr<Tensor> Extract(const Tensor& images) const;
  // Noise only, applied to already reduced rows.
  Tensor AddNoise(Tensor clean, std::uint64_t first_draw) const;

 private:
  FeatureExtractor() = default;

  Network head_;
  std::shared_ptr<const PcaModel> pca_;
  std::optional<NoiseModel> noise_;
  mutable std::atomic<std::uint64_t> next_draw_{0};
};

// Server half: optional PCA reconstruction, then the tail network.
class Analyzer {
 public:
  static absl::StatusOr<Analyzer> Create(std::shared_ptr<const PcaModel> pca,
                                         Network tail);

  const Network& tail() const { return tail_; }
  const std::shared_ptr<const PcaModel>& pca() const { return pca_; }
  std::size_t input_dim() const;
  std::size_t num_classes() const { return tail_.num_classes(); }

  // features: [N, input_dim] -> tail output [N, C].
  absl::StatusOr<Tensor> Analyze(const Tensor& features) const;

 private:
  Analyzer() = default;

  std::shared_ptr<const PcaModel> pca_;
  Network tail_;
};

struct Embedding {
  EmbeddingConfig config;
  FeatureExtractor extractor;
  Analyzer analyzer;
};

// Fits PCA on the flattened boundary features of the calibration images.
absl::StatusOr<std::shared_ptr<const PcaModel>> FitBoundaryPca(
    const Network& net, std::size_t split_index, std::uint32_t pca_dim,
    const Tensor& calibration_images);

// Siamese kinds require net.siamese_split() == split_index; the other kinds
// require a network that was not Siamese fine-tuned. Reduced kinds fit PCA
// on calibration_images unless a fitted model is supplied.
absl::StatusOr<Embedding> BuildEmbedding(
    const Network& net, const EmbeddingConfig& cfg,
    const Tensor* calibration_images,
    std::shared_ptr<const PcaModel> fitted_pca = nullptr);

// Network plus the optional embedding sections of an "SPNN" file:
//   "EMB0" | u8 kind | u16 split | u32 pca_dim (0 when unreduced)
//   "PCA0" | u32 k | u32 d | f32 mean[d] | f32 components[d * k]
// sigma is deliberately absent; noise stays with the client.
struct ModelFile {
  Network net;
  std::optional<EmbeddingKind> kind;
  std::optional<std::size_t> split_index;
  std::shared_ptr<const PcaModel> pca;
  ModelHash hash{};
};

std::vector<std::uint8_t> SerializeModelFile(const ModelFile& file);
absl::StatusOr<ModelFile> ParseModelFile(std::span<const std::uint8_t> bytes);
// The hash field is ignored on save and filled in on load.
absl::Status SaveModelFile(const ModelFile& file,
                           const std::filesystem::path& path);
absl::StatusOr<ModelFile> LoadModelFile(const std::filesystem::path& path);

}  // namespace splitpriv

#endif  // SPLITPRIV_EMBEDDING_H_
