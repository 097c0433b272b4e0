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

#ifndef SPLITPRIV_LAYER_H_
#define SPLITPRIV_LAYER_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "splitpriv/rng.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

// Values double as the on-disk kind tag.
enum class LayerKind : std::uint8_t {
  kConv2D = 1,
  kDense = 2,
  kReLU = 3,
  kMaxPool2D = 4,
  kFlatten = 5,
  kSoftmax = 6,
};

const char* LayerKindName(LayerKind kind);

struct Conv2DParams {
  std::uint32_t out_channels = 0;
  std::uint32_t kernel_h = 0;
  std::uint32_t kernel_w = 0;
  std::uint32_t stride = 1;
  std::uint32_t padding = 0;
  friend bool operator==(const Conv2DParams&, const Conv2DParams&) = default;
};

struct DenseParams {
  std::uint32_t out_features = 0;
  friend bool operator==(const DenseParams&, const DenseParams&) = default;
};

struct MaxPool2DParams {
  std::uint32_t window = 2;
  std::uint32_t stride = 2;
  friend bool operator==(const MaxPool2DParams&,
                         const MaxPool2DParams&) = default;
};

// One stage of a linear network. Image activations are laid out
// [batch, height, width, channels]; Dense and Softmax take [batch, features].
//
// Conv2D weights are {kernel[kh, kw, in_channels, out_channels], bias[out]};
// Dense weights are {matrix[in_features, out_features], bias[out]}. The other
// kinds are stateless.
class Layer {
 public:
  static Layer Conv2D(std::uint32_t out_channels, std::uint32_t kernel_h,
                      std::uint32_t kernel_w, std::uint32_t stride = 1,
                      std::uint32_t padding = 0);
  static Layer Dense(std::uint32_t out_features);
  static Layer ReLU();
  static Layer MaxPool2D(std::uint32_t window, std::uint32_t stride);
  static Layer Flatten();
  static Layer Softmax();

  // Inverse of EncodedParams(); used by the model reader.
  static absl::StatusOr<Layer> FromEncoded(LayerKind kind,
                                           std::span<const std::uint32_t> p);
  static std::size_t EncodedParamCount(LayerKind kind);

  LayerKind kind() const { return kind_; }
  bool has_weights() const {
    return kind_ == LayerKind::kConv2D || kind_ == LayerKind::kDense;
  }
  const Conv2DParams& conv() const { return std::get<Conv2DParams>(params_); }
  const DenseParams& dense() const { return std::get<DenseParams>(params_); }
  const MaxPool2DParams& pool() const {
    return std::get<MaxPool2DParams>(params_);
  }
  std::vector<std::uint32_t> EncodedParams() const;

  std::vector<Tensor>& weights() { return weights_; }
  const std::vector<Tensor>& weights() const { return weights_; }

  // Per-sample output shape, or an error naming the offending dimensions.
  absl::StatusOr<Shape> OutputShape(const Shape& input) const;
  // Weight shapes implied by the per-sample input shape.
  std::vector<Shape> WeightShapes(const Shape& input) const;
  // Glorot-uniform kernels, zero biases.
  void InitializeWeights(const Shape& input, Rng& rng);

  // Batch forward pass. The input shape must already be validated.
  Tensor Forward(const Tensor& input) const;
  // Same arithmetic in double precision against caller-supplied weights.
  TensorD ForwardReference(const TensorD& input,
                           std::span<const TensorD> weights) const;

  // Returns dLoss/dInput given dLoss/dOutput, adding this layer's weight
  // gradients into weight_grads (shaped like weights()).
  Tensor Backward(const Tensor& input, const Tensor& output,
                  const Tensor& grad_output,
                  std::span<Tensor> weight_grads) const;

  // Analytic operation count for one sample.
  std::uint64_t FlopsPerSample(const Shape& input) const;

  friend bool operator==(const Layer& a, const Layer& b) {
    return a.kind_ == b.kind_ && a.params_ == b.params_ &&
           a.weights_ == b.weights_;
  }

 private:
  using Params =
      std::variant<std::monostate, Conv2DParams, DenseParams, MaxPool2DParams>;
  Layer(LayerKind kind, Params params) : kind_(kind), params_(params) {}

  LayerKind kind_;
  Params params_;
  std::vector<Tensor> weights_;
};

}  // namespace splitpriv

#endif  // SPLITPRIV_LAYER_H_
