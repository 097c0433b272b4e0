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

#include "splitpriv/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "splitpriv/rng.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {

absl::StatusOr<Network> MakeDeskScaleClassifier(std::uint32_t num_classes,
                                                std::uint64_t seed) {
  if (num_classes < 2) {
    return absl::InvalidArgumentError("classifier needs at least 2 classes");
  }
  std::vector<Layer> layers{
      Layer::Conv2D(8, 3, 3, 1, 1),
      Layer::ReLU(),
      Layer::MaxPool2D(2, 2),
      Layer::Conv2D(16, 3, 3, 1, 1),
      Layer::ReLU(),
      Layer::MaxPool2D(2, 2),
      Layer::Flatten(),
      Layer::Dense(32),
      Layer::ReLU(),
      Layer::Dense(num_classes),
      Layer::Softmax(),
  };
  return Network::Initialize(Shape{16, 16, 1}, std::move(layers), seed);
}

std::size_t ArgMax(std::span<const float> row) {
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) -
                                  row.begin());
}

absl::StatusOr<CrossEntropy> SoftmaxCrossEntropy(
    const Tensor& probs, std::span<const std::uint16_t> labels) {
  if (probs.rank() != 2 || probs.dim(0) != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("probabilities ", ShapeToString(probs.shape()), " vs ",
                     labels.size(), " labels"));
  }
  const std::size_t batch = probs.dim(0);
  const std::size_t classes = probs.dim(1);
  CrossEntropy ce;
  ce.grad_logits = Tensor(probs.shape());
  double total = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    if (labels[b] >= classes) {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", labels[b], " >= class count ", classes));
    }
    auto p = probs.row(b);
    auto g = ce.grad_logits.row(b);
    total -= std::log(std::max(static_cast<double>(p[labels[b]]), 1e-30));
    if (ArgMax(p) == labels[b]) ++ce.correct;
    for (std::size_t c = 0; c < classes; ++c) {
      const double target = c == labels[b] ? 1.0 : 0.0;
      g[c] = static_cast<float>((p[c] - target) / static_cast<double>(batch));
    }
  }
  ce.mean_loss = total / static_cast<double>(batch);
  return ce;
}

double Accuracy(const Tensor& probs, std::span<const std::uint16_t> labels) {
  if (labels.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    if (ArgMax(probs.row(b)) == labels[b]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

absl::StatusOr<std::vector<EpochStats>> TrainClassifier(
    Network* net, const Tensor& inputs, std::span<const std::uint16_t> labels,
    const SgdConfig& cfg) {
  SPLITPRIV_RETURN_IF_ERROR(cfg.Validate());
  SPLITPRIV_RETURN_IF_ERROR(CheckBatchShape(*net, inputs));
  if (inputs.dim(0) != labels.size()) {
    return absl::InvalidArgumentError("input and label counts differ");
  }
  if (net->layers().back().kind() != LayerKind::kSoftmax) {
    return absl::FailedPreconditionError(
        "classifier training requires a final Softmax layer");
  }
  const std::size_t n = labels.size();
  const std::size_t softmax = net->num_layers() - 1;
  std::vector<std::size_t> order(n);
  std::vector<EpochStats> log;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(DeriveSeed(cfg.seed, epoch));
    rng.Shuffle(order);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t stop = std::min(n, start + cfg.batch_size);
      std::span<const std::size_t> idx(order.data() + start, stop - start);
      Tensor batch = GatherRows(inputs, idx);
      std::vector<std::uint16_t> y;
      y.reserve(idx.size());
      for (std::size_t i : idx) y.push_back(labels[i]);

      SPLITPRIV_ASSIGN_OR_RETURN(Activations acts, Forward(*net, batch));
      SPLITPRIV_ASSIGN_OR_RETURN(CrossEntropy ce,
                                 SoftmaxCrossEntropy(acts.back(), y));
      loss_sum += ce.mean_loss * static_cast<double>(idx.size());
      correct += ce.correct;
      Gradients grads = ZeroGradients(*net);
      SPLITPRIV_RETURN_IF_ERROR(BackwardRange(*net, acts,
                                              std::move(ce.grad_logits),
                                              softmax, 0, &grads)
                                    .status());
      SPLITPRIV_RETURN_IF_ERROR(SgdStep(net, grads, cfg));
    }
    log.push_back({epoch, loss_sum / static_cast<double>(n),
                   static_cast<double>(correct) / static_cast<double>(n)});
  }
  return log;
}

absl::StatusOr<Tensor> Predict(const Network& net, const Tensor& inputs,
                               std::size_t chunk) {
  SPLITPRIV_RETURN_IF_ERROR(CheckBatchShape(net, inputs));
  const std::size_t n = inputs.dim(0);
  std::vector<float> out;
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t stop = std::min(n, start + chunk);
    idx.resize(stop - start);
    std::iota(idx.begin(), idx.end(), start);
    SPLITPRIV_ASSIGN_OR_RETURN(Tensor y,
                               ForwardOutput(net, GatherRows(inputs, idx)));
    out.insert(out.end(), y.data().begin(), y.data().end());
  }
  Shape shape = net.ShapeAt(net.num_layers());
  shape.insert(shape.begin(), n);
  return Tensor(std::move(shape), std::move(out));
}

}  // namespace splitpriv
