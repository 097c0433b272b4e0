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

#include "splitpriv/network.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "splitpriv/rng.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {
namespace {

absl::StatusOr<std::vector<Shape>> ChainShapes(
    const Shape& input, const std::vector<Layer>& layers) {
  if (input.empty()) {
    return absl::InvalidArgumentError("network input shape is empty");
  }
  for (std::size_t d : input) {
    if (d == 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "input shape ", ShapeToString(input), " has a zero-sized dimension"));
    }
  }
  std::vector<Shape> shapes{input};
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto out = layers[l].OutputShape(shapes.back());
    if (!out.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("layer ", l, ": ", out.status().message()));
    }
    shapes.push_back(*std::move(out));
  }
  return shapes;
}

}  // namespace

absl::StatusOr<Network> Network::Create(Shape input_shape,
                                        std::vector<Layer> layers) {
  if (layers.empty())
    return absl::InvalidArgumentError("network has no layers");
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<Shape> shapes,
                             ChainShapes(input_shape, layers));
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::vector<Shape> want = layers[l].WeightShapes(shapes[l]);
    const auto& have = layers[l].weights();
    if (have.size() != want.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "layer ", l, " (", LayerKindName(layers[l].kind()), ") expects ",
          want.size(), " weight tensors, has ", have.size()));
    }
    for (std::size_t w = 0; w < want.size(); ++w) {
      if (have[w].shape() != want[w]) {
        return absl::InvalidArgumentError(
            absl::StrCat("layer ", l, " weight ", w, " has shape ",
                         ShapeToString(have[w].shape()), ", expected ",
                         ShapeToString(want[w])));
      }
    }
  }
  Network net;
  net.input_shape_ = std::move(input_shape);
  net.layers_ = std::move(layers);
  net.boundary_shapes_ = std::move(shapes);
  return net;
}

absl::StatusOr<Network> Network::Initialize(Shape input_shape,
                                            std::vector<Layer> layers,
                                            std::uint64_t seed) {
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<Shape> shapes,
                             ChainShapes(input_shape, layers));
  Rng rng(seed);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].InitializeWeights(shapes[l], rng);
  }
  return Create(std::move(input_shape), std::move(layers));
}

absl::Status CheckBatchShape(const Network& net, const Tensor& batch) {
  const Shape& want = net.input_shape();
  if (batch.rank() != want.size() + 1 || batch.dim(0) == 0 ||
      !std::equal(want.begin(), want.end(), batch.shape().begin() + 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("batch shape ", ShapeToString(batch.shape()),
                     " does not match [B]", ShapeToString(want)));
  }
  return absl::OkStatus();
}

absl::StatusOr<Activations> Forward(const Network& net, const Tensor& batch) {
  SPLITPRIV_RETURN_IF_ERROR(CheckBatchShape(net, batch));
  Activations acts;
  acts.reserve(net.num_layers() + 1);
  acts.push_back(batch);
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    acts.push_back(net.layers()[l].Forward(acts.back()));
    if (!acts.back().AllFinite()) {
      return absl::InternalError(
          absl::StrCat("non-finite activation after layer ", l));
    }
  }
  return acts;
}

absl::StatusOr<Tensor> ForwardOutput(const Network& net, const Tensor& batch) {
  SPLITPRIV_RETURN_IF_ERROR(CheckBatchShape(net, batch));
  Tensor x = batch;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    x = net.layers()[l].Forward(x);
  }
  if (!x.AllFinite()) return absl::InternalError("non-finite network output");
  return x;
}

absl::StatusOr<Tensor> BoundaryFeatures(const Network& net,
                                        const Tensor& inputs,
                                        std::size_t boundary,
                                        std::size_t chunk) {
  SPLITPRIV_RETURN_IF_ERROR(CheckBatchShape(net, inputs));
  if (boundary > net.num_layers()) {
    return absl::OutOfRangeError(
        absl::StrCat("boundary ", boundary, " beyond ", net.num_layers()));
  }
  const std::size_t n = inputs.dim(0);
  const std::size_t width = NumElements(net.ShapeAt(boundary));
  std::vector<float> out;
  out.reserve(n * width);
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t stop = std::min(n, start + chunk);
    idx.resize(stop - start);
    std::iota(idx.begin(), idx.end(), start);
    Tensor x = GatherRows(inputs, idx);
    for (std::size_t l = 0; l < boundary; ++l) x = net.layers()[l].Forward(x);
    if (!x.AllFinite()) {
      return absl::InternalError(
          absl::StrCat("non-finite activation at boundary ", boundary));
    }
    out.insert(out.end(), x.data().begin(), x.data().end());
  }
  return Tensor(Shape{n, width}, std::move(out));
}

TensorD ForwardReference(const Network& net, const TensorD& batch,
                         const std::vector<std::vector<TensorD>>& weights) {
  TensorD x = batch;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    x = net.layers()[l].ForwardReference(x, weights[l]);
  }
  return x;
}

Gradients ZeroGradients(const Network& net) {
  Gradients g;
  g.per_layer.reserve(net.num_layers());
  for (const Layer& layer : net.layers()) {
    std::vector<Tensor> zeros;
    for (const Tensor& w : layer.weights()) zeros.emplace_back(w.shape());
    g.per_layer.push_back(std::move(zeros));
  }
  return g;
}

absl::StatusOr<Tensor> BackwardRange(const Network& net,
                                     const Activations& acts, Tensor grad,
                                     std::size_t end, std::size_t begin,
                                     Gradients* grads) {
  if (acts.size() != net.num_layers() + 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("activations cover ", acts.size(),
                     " boundaries, network has ", net.num_layers() + 1));
  }
  if (begin > end || end > net.num_layers()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid backward range [", begin, ", ", end, ")"));
  }
  if (grads->per_layer.size() != net.num_layers()) {
    return absl::InvalidArgumentError("gradient buffer does not match network");
  }
  if (grad.shape() != acts[end].shape()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "gradient shape ", ShapeToString(grad.shape()),
        " does not match activation ", ShapeToString(acts[end].shape())));
  }
  for (std::size_t l = end; l-- > begin;) {
    const Tensor& in = acts[l];
    if (in.rank() != net.ShapeAt(l).size() + 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("activation ", l, " does not belong to this network"));
    }
    grad = net.layers()[l].Backward(in, acts[l + 1], grad, grads->per_layer[l]);
  }
  return grad;
}

absl::StatusOr<Gradients> Backward(const Network& net, const Activations& acts,
                                   const Tensor& loss_grad) {
  Gradients grads = ZeroGradients(net);
  SPLITPRIV_ASSIGN_OR_RETURN(
      Tensor unused,
      BackwardRange(net, acts, loss_grad, net.num_layers(), 0, &grads));
  (void)unused;
  return grads;
}

absl::Status SgdConfig::Validate() const {
  if (!(learning_rate >= 0.0f) || !std::isfinite(learning_rate)) {
    return absl::InvalidArgumentError("learning_rate must be finite and >= 0");
  }
  if (batch_size == 0)
    return absl::InvalidArgumentError("batch_size must be >= 1");
  if (epochs == 0) return absl::InvalidArgumentError("epochs must be >= 1");
  return absl::OkStatus();
}

absl::Status SgdStep(Network* net, const Gradients& grads,
                     const SgdConfig& cfg) {
  SPLITPRIV_RETURN_IF_ERROR(cfg.Validate());
  auto& layers = net->mutable_layers();
  if (grads.per_layer.size() != layers.size()) {
    return absl::InvalidArgumentError("gradient buffer does not match network");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& weights = layers[l].weights();
    const auto& g = grads.per_layer[l];
    if (g.size() != weights.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("layer ", l, " gradient count mismatch"));
    }
    for (std::size_t w = 0; w < weights.size(); ++w) {
      if (g[w].shape() != weights[w].shape()) {
        return absl::InvalidArgumentError(
            absl::StrCat("layer ", l, " gradient ", w, " shape mismatch"));
      }
      auto wd = weights[w].data();
      auto gd = g[w].data();
      for (std::size_t i = 0; i < wd.size(); ++i) {
        wd[i] -= cfg.learning_rate * gd[i];
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::pair<Network, Network>> SplitAt(const Network& net,
                                                    std::size_t i) {
  if (i < 1 || i >= net.num_layers()) {
    return absl::OutOfRangeError(absl::StrCat(
        "split index ", i, " outside [1, ", net.num_layers() - 1, "]"));
  }
  std::vector<Layer> head(net.layers().begin(), net.layers().begin() + i);
  std::vector<Layer> tail(net.layers().begin() + i, net.layers().end());
  SPLITPRIV_ASSIGN_OR_RETURN(
      Network h, Network::Create(net.input_shape(), std::move(head)));
  SPLITPRIV_ASSIGN_OR_RETURN(Network t,
                             Network::Create(net.ShapeAt(i), std::move(tail)));
  return std::make_pair(std::move(h), std::move(t));
}

}  // namespace splitpriv
