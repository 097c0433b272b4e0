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

#ifndef SPLITPRIV_SIAMESE_H_
#define SPLITPRIV_SIAMESE_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "splitpriv/datagen.h"
#include "splitpriv/network.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

struct ContrastiveResult {
  double loss = 0.0;
  std::vector<float> grad_f1;
  std::vector<float> grad_f2;
};

// Contrastive loss on a feature pair (both flattened to vectors):
//   similar:     ||f1 - f2||^2
//   dissimilar:  max(0, margin - ||f1 - f2||)^2
// The dissimilar gradient is taken as zero at d == 0 and at d == margin.
absl::StatusOr<ContrastiveResult> ContrastiveLoss(std::span<const float> f1,
                                                  std::span<const float> f2,
                                                  bool similar, double margin);

struct SiameseConfig {
  std::size_t split_index = 9;
  float margin = 1.0f;
  float lambda = 1.0f;
  SgdConfig sgd{0.05f, 16, 15, 7};
  std::size_t pairs_per_epoch = 960;

  absl::Status Validate(const Network& net) const;
};

struct SiameseEpochLog {
  std::size_t epoch = 0;
  double cls_loss = 0.0;          // mean over pairs of CE(a) + CE(b)
  double contrastive_loss = 0.0;  // mean over pairs, before lambda
  double primary_acc = 0.0;       // over both branches of every pair
};

// Twin-branch fine-tuning with one shared parameter set. Per pair the loss is
//   CE(a) + CE(b) + lambda * contrastive(f_a / sqrt(D), f_b / sqrt(D))
// where f is the flattened activation at boundary split_index and D its
// length. All layers are updated. Pairs are redrawn every epoch.
absl::StatusOr<std::vector<SiameseEpochLog>> SiameseFinetune(
    Network* net, const Dataset& train, const SiameseConfig& cfg);

// Line-oriented CSV: epoch,cls_loss,contrastive_loss,primary_acc
void WriteSiameseLogCsv(std::span<const SiameseEpochLog> log,
                        std::ostream& out);

struct ClassDistances {
  double intra = 0.0;  // mean distance over same-primary pairs
  double inter = 0.0;  // mean distance over different-primary pairs
};

// Mean Euclidean distances between flattened boundary-i activations over all
// sample pairs of the dataset, grouped by primary label.
absl::StatusOr<ClassDistances> PrimaryClassDistances(const Network& net,
                                                     const Dataset& data,
                                                     std::size_t split_index);

}  // namespace splitpriv

#endif  // SPLITPRIV_SIAMESE_H_
