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

#ifndef SPLITPRIV_TRANSFER_ATTACK_H_
#define SPLITPRIV_TRANSFER_ATTACK_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "splitpriv/datagen.h"
#include "splitpriv/embedding.h"
#include "splitpriv/network.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

// The attacker keeps the first freeze_index layers of the victim fixed and
// trains Flatten -> Dense(hidden) -> ReLU -> Dense(T) -> Softmax on top to
// recover the sensitive label.
struct TransferAttackConfig {
  std::size_t freeze_index = 9;
  std::size_t hidden = 64;
  SgdConfig sgd{0.05f, 16, 20, 11};

  absl::Status Validate() const;
};

struct AttackResult {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

// Trains the attack head on frozen features. The rows of train_features and
// test_features are what the frozen part emits for each sample.
absl::StatusOr<AttackResult> TrainAttackHead(
    const Tensor& train_features, std::span<const std::uint16_t> train_labels,
    const Tensor& test_features, std::span<const std::uint16_t> test_labels,
    std::uint32_t num_classes, const TransferAttackConfig& cfg);

// Attack through the raw layer split of net at cfg.freeze_index.
absl::StatusOr<AttackResult> TransferAttack(const Network& net,
                                            const TransferAttackConfig& cfg,
                                            const Dataset& train,
                                            const Dataset& test);

// Attack through a full client-side extractor (head, PCA and noise). Train
// and test rows draw noise from disjoint index ranges starting at
// first_draw.
absl::StatusOr<AttackResult> TransferAttack(const FeatureExtractor& extractor,
                                            const TransferAttackConfig& cfg,
                                            const Dataset& train,
                                            const Dataset& test,
                                            std::uint64_t first_draw);

}  // namespace splitpriv

#endif  // SPLITPRIV_TRANSFER_ATTACK_H_
