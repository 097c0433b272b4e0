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

#include "splitpriv/transfer_attack.h"

#include <vector>

#include "absl/strings/str_cat.h"
#include "splitpriv/classifier.h"
#include "splitpriv/layer.h"
#include "splitpriv/rng.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {

absl::Status TransferAttackConfig::Validate() const {
  if (freeze_index == 0) {
    return absl::InvalidArgumentError(
        "transfer attack needs freeze_index >= 1");
  }
  if (hidden == 0) return absl::InvalidArgumentError("hidden must be >= 1");
  return sgd.Validate();
}

absl::StatusOr<AttackResult> TrainAttackHead(
    const Tensor& train_features, std::span<const std::uint16_t> train_labels,
    const Tensor& test_features, std::span<const std::uint16_t> test_labels,
    std::uint32_t num_classes, const TransferAttackConfig& cfg) {
  SPLITPRIV_RETURN_IF_ERROR(cfg.Validate());
  if (num_classes < 2) {
    return absl::InvalidArgumentError("attack needs >= 2 sensitive classes");
  }
  if (train_features.rank() != 2 || test_features.rank() != 2 ||
      train_features.dim(1) != test_features.dim(1)) {
    return absl::InvalidArgumentError(
        "attack features must be [N, d] with matching d");
  }
  if (train_features.dim(0) != train_labels.size() ||
      test_features.dim(0) != test_labels.size()) {
    return absl::InvalidArgumentError("one sensitive label per feature row");
  }
  for (auto labels : {train_labels, test_labels}) {
    for (std::uint16_t y : labels) {
      if (y >= num_classes) {
        return absl::InvalidArgumentError(
            absl::StrCat("sensitive label ", y, " >= ", num_classes));
      }
    }
  }
  std::vector<Layer> layers{
      Layer::Flatten(), Layer::Dense(static_cast<std::uint32_t>(cfg.hidden)),
      Layer::ReLU(), Layer::Dense(num_classes), Layer::Softmax()};
  SPLITPRIV_ASSIGN_OR_RETURN(
      Network head,
      Network::Initialize(Shape{train_features.dim(1)}, std::move(layers),
                          DeriveSeed(cfg.sgd.seed, 0x617474)));
  SPLITPRIV_RETURN_IF_ERROR(
      TrainClassifier(&head, train_features, train_labels, cfg.sgd).status());
  AttackResult result;
  SPLITPRIV_ASSIGN_OR_RETURN(Tensor train_probs, Predict(head, train_features));
  result.train_accuracy = Accuracy(train_probs, train_labels);
  SPLITPRIV_ASSIGN_OR_RETURN(Tensor test_probs, Predict(head, test_features));
  result.test_accuracy = Accuracy(test_probs, test_labels);
  return result;
}

absl::StatusOr<AttackResult> TransferAttack(const Network& net,
                                            const TransferAttackConfig& cfg,
                                            const Dataset& train,
                                            const Dataset& test) {
  SPLITPRIV_RETURN_IF_ERROR(cfg.Validate());
  if (cfg.freeze_index >= net.num_layers()) {
    return absl::OutOfRangeError(absl::StrCat("freeze_index ", cfg.freeze_index,
                                              " outside [1, ",
                                              net.num_layers() - 1, "]"));
  }
  // Frozen layers never change, so their outputs are computed once.
  SPLITPRIV_ASSIGN_OR_RETURN(
      Tensor f_train, BoundaryFeatures(net, train.images, cfg.freeze_index));
  SPLITPRIV_ASSIGN_OR_RETURN(
      Tensor f_test, BoundaryFeatures(net, test.images, cfg.freeze_index));
  return TrainAttackHead(f_train, train.sensitive, f_test, test.sensitive,
                         train.sensitive_classes, cfg);
}

absl::StatusOr<AttackResult> TransferAttack(const FeatureExtractor& extractor,
                                            const TransferAttackConfig& cfg,
                                            const Dataset& train,
                                            const Dataset& test,
                                            std::uint64_t first_draw) {
  SPLITPRIV_RETURN_IF_ERROR(cfg.Validate());
  if (cfg.freeze_index != extractor.head().num_layers()) {
    return absl::InvalidArgumentError(
        absl::StrCat("freeze_index ", cfg.freeze_index,
                     " does not match the extractor "
                     "split ",
                     extractor.head().num_layers()));
  }
  SPLITPRIV_ASSIGN_OR_RETURN(Tensor f_train,
                             extractor.ExtractAt(train.images, first_draw));
  SPLITPRIV_ASSIGN_OR_RETURN(
      Tensor f_test,
      extractor.ExtractAt(test.images, first_draw + train.size()));
  return TrainAttackHead(f_train, train.sensitive, f_test, test.sensitive,
                         train.sensitive_classes, cfg);
}

}  // namespace splitpriv
