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

#ifndef SPLITPRIV_CLASSIFIER_H_
#define SPLITPRIV_CLASSIFIER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "splitpriv/network.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

// Conv(8,3x3)-ReLU-Pool(2)-Conv(16,3x3)-ReLU-Pool(2)-Flatten-Dense(32)-ReLU-
// Dense(C)-Softmax on 16x16x1 images, "same" padding on both convolutions.
// Boundary i (the activation after layer i-1) is:
//   1 conv1  2 relu1  3 pool1  4 conv2  5 relu2  6 pool2  7 flatten
//   8 dense32  9 relu3  10 logits
absl::StatusOr<Network> MakeDeskScaleClassifier(std::uint32_t num_classes,
                                                std::uint64_t seed);

struct CrossEntropy {
  double mean_loss = 0.0;
  std::size_t correct = 0;
  // dMeanLoss/dLogits, i.e. (p - onehot) / batch.
  Tensor grad_logits;
};

// probs: [B, C] softmax output. Loss terms are clamped at log(1e-30).
absl::StatusOr<CrossEntropy> SoftmaxCrossEntropy(
    const Tensor& probs, std::span<const std::uint16_t> labels);

std::size_t ArgMax(std::span<const float> row);

double Accuracy(const Tensor& probs, std::span<const std::uint16_t> labels);

struct EpochStats {
  std::size_t epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

// Minibatch SGD on softmax cross-entropy. The final layer must be Softmax.
// Sample order is reshuffled every epoch from cfg.seed.
absl::StatusOr<std::vector<EpochStats>> TrainClassifier(
    Network* net, const Tensor& inputs, std::span<const std::uint16_t> labels,
    const SgdConfig& cfg);

// Forward in fixed-size chunks; returns the stacked final outputs.
absl::StatusOr<Tensor> Predict(const Network& net, const Tensor& inputs,
                               std::size_t chunk = 64);

}  // namespace splitpriv

#endif  // SPLITPRIV_CLASSIFIER_H_
