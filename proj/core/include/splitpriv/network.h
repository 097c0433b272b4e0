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

#ifndef SPLITPRIV_NETWORK_H_
#define SPLITPRIV_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "splitpriv/layer.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

// Linear chain of layers over a fixed per-sample input shape.
class Network {
 public:
  Network() = default;

  // Validates that shapes chain from input_shape and that every weighted
  // layer carries weights of the implied shapes.
  static absl::StatusOr<Network> Create(Shape input_shape,
                                        std::vector<Layer> layers);
  // Like Create(), but initializes weights from a seeded generator.
  static absl::StatusOr<Network> Initialize(Shape input_shape,
                                            std::vector<Layer> layers,
                                            std::uint64_t seed);

  const Shape& input_shape() const { return input_shape_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }
  std::size_t num_layers() const { return layers_.size(); }

  // Per-sample shape at boundary i: the input for i == 0, otherwise the
  // output of layer i-1.
  const Shape& ShapeAt(std::size_t boundary) const {
    return boundary_shapes_[boundary];
  }
  std::size_t num_classes() const {
    return NumElements(boundary_shapes_.back());
  }

  // Layer index the model was Siamese fine-tuned at, if any.
  std::optional<std::size_t> siamese_split() const { return siamese_split_; }
  void set_siamese_split(std::optional<std::size_t> split) {
    siamese_split_ = split;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.input_shape_ == b.input_shape_ && a.layers_ == b.layers_ &&
           a.siamese_split_ == b.siamese_split_;
  }

 private:
  Shape input_shape_;
  std::vector<Layer> layers_;
  std::vector<Shape> boundary_shapes_;
  std::optional<std::size_t> siamese_split_;
};

// acts[0] is the input batch; acts[l + 1] is the output of layer l.
using Activations = std::vector<Tensor>;

// Weight gradients, one entry per layer, shaped like Layer::weights().
struct Gradients {
  std::vector<std::vector<Tensor>> per_layer;
};

absl::Status CheckBatchShape(const Network& net, const Tensor& batch);

absl::StatusOr<Activations> Forward(const Network& net, const Tensor& batch);

// Final output only; does not retain intermediate activations.
absl::StatusOr<Tensor> ForwardOutput(const Network& net, const Tensor& batch);

// Activation at a boundary (0 = input, num_layers = output), computed in
// chunks and flattened to [N, features].
absl::StatusOr<Tensor> BoundaryFeatures(const Network& net,
                                        const Tensor& inputs,
                                        std::size_t boundary,
                                        std::size_t chunk = 64);

// Double-precision forward pass against caller-supplied weights (shaped like
// each layer's weights). Intended for numerical verification.
TensorD ForwardReference(const Network& net, const TensorD& batch,
                         const std::vector<std::vector<TensorD>>& weights);

Gradients ZeroGradients(const Network& net);

// Back-propagates dLoss/dOutput of the final layer through the whole net.
absl::StatusOr<Gradients> Backward(const Network& net, const Activations& acts,
                                   const Tensor& loss_grad);

// Back-propagates grad (dLoss/d acts[end]) through layers [begin, end),
// accumulating weight gradients into grads. Returns dLoss/d acts[begin].
absl::StatusOr<Tensor> BackwardRange(const Network& net,
                                     const Activations& acts, Tensor grad,
                                     std::size_t end, std::size_t begin,
                                     Gradients* grads);

struct SgdConfig {
  float learning_rate = 0.05f;
  std::size_t batch_size = 16;
  std::size_t epochs = 15;
  std::uint64_t seed = 7;

  absl::Status Validate() const;
};

// w <- w - learning_rate * g for every weight.
absl::Status SgdStep(Network* net, const Gradients& grads,
                     const SgdConfig& cfg);

// head = layers[0, i), tail = layers[i, n). Requires 1 <= i < n.
absl::StatusOr<std::pair<Network, Network>> SplitAt(const Network& net,
                                                    std::size_t i);

}  // namespace splitpriv

#endif  // SPLITPRIV_NETWORK_H_
