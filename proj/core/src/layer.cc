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

#include "splitpriv/layer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace splitpriv {
namespace {

struct ConvGeometry {
  std::size_t batch, in_h, in_w, in_c, out_h, out_w, out_c;
  std::size_t kh, kw, stride, pad;
};

ConvGeometry Geometry(const Conv2DParams& p, const Shape& batch_shape) {
  ConvGeometry g;
  g.batch = batch_shape[0];
  g.in_h = batch_shape[1];
  g.in_w = batch_shape[2];
  g.in_c = batch_shape[3];
  g.kh = p.kernel_h;
  g.kw = p.kernel_w;
  g.stride = p.stride;
  g.pad = p.padding;
  g.out_h = (g.in_h + 2 * g.pad - g.kh) / g.stride + 1;
  g.out_w = (g.in_w + 2 * g.pad - g.kw) / g.stride + 1;
  g.out_c = p.out_channels;
  return g;
}

// Returns false when the tap falls into the zero padding.
inline bool SourceIndex(std::size_t out, std::size_t k, std::size_t stride,
                        std::size_t pad, std::size_t extent, std::size_t* src) {
  const std::size_t pos = out * stride + k;
  if (pos < pad || pos - pad >= extent) return false;
  *src = pos - pad;
  return true;
}

template <typename T>
BasicTensor<T> ConvForward(const Conv2DParams& p, const BasicTensor<T>& in,
                           const BasicTensor<T>& kernel,
                           const BasicTensor<T>& bias) {
  const ConvGeometry g = Geometry(p, in.shape());
  BasicTensor<T> out(Shape{g.batch, g.out_h, g.out_w, g.out_c});
  const T* x = in.data().data();
  const T* k = kernel.data().data();
  T* o = out.data().data();
  for (std::size_t b = 0; b < g.batch; ++b) {
    for (std::size_t oy = 0; oy < g.out_h; ++oy) {
      for (std::size_t ox = 0; ox < g.out_w; ++ox) {
        T* acc = o + ((b * g.out_h + oy) * g.out_w + ox) * g.out_c;
        std::copy(bias.data().begin(), bias.data().end(), acc);
        for (std::size_t ky = 0; ky < g.kh; ++ky) {
          std::size_t iy;
          if (!SourceIndex(oy, ky, g.stride, g.pad, g.in_h, &iy)) continue;
          for (std::size_t kx = 0; kx < g.kw; ++kx) {
            std::size_t ix;
            if (!SourceIndex(ox, kx, g.stride, g.pad, g.in_w, &ix)) continue;
            const T* px = x + ((b * g.in_h + iy) * g.in_w + ix) * g.in_c;
            const T* pk = k + (ky * g.kw + kx) * g.in_c * g.out_c;
            for (std::size_t ci = 0; ci < g.in_c; ++ci) {
              const T v = px[ci];
              const T* row = pk + ci * g.out_c;
              for (std::size_t co = 0; co < g.out_c; ++co) {
                acc[co] += v * row[co];
              }
            }
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
BasicTensor<T> DenseForward(const BasicTensor<T>& in,
                            const BasicTensor<T>& matrix,
                            const BasicTensor<T>& bias) {
  const std::size_t batch = in.dim(0);
  const std::size_t d_in = matrix.dim(0);
  const std::size_t d_out = matrix.dim(1);
  BasicTensor<T> out(Shape{batch, d_out});
  std::vector<double> acc(d_out);
  const T* w = matrix.data().data();
  for (std::size_t b = 0; b < batch; ++b) {
    auto x = in.row(b);
    for (std::size_t j = 0; j < d_out; ++j) acc[j] = bias[j];
    for (std::size_t i = 0; i < d_in; ++i) {
      const double v = x[i];
      const T* row = w + i * d_out;
      for (std::size_t j = 0; j < d_out; ++j) acc[j] += v * row[j];
    }
    auto y = out.row(b);
    for (std::size_t j = 0; j < d_out; ++j) y[j] = static_cast<T>(acc[j]);
  }
  return out;
}

template <typename T>
BasicTensor<T> ReluForward(const BasicTensor<T>& in) {
  BasicTensor<T> out(in.shape());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = in[i] > T{0} ? in[i] : T{0};
  }
  return out;
}

// Index (into the input tensor) of the first maximum of one pooling window.
template <typename T>
std::size_t PoolArgMax(const BasicTensor<T>& in, const MaxPool2DParams& p,
                       std::size_t b, std::size_t oy, std::size_t ox,
                       std::size_t c) {
  const std::size_t h = in.dim(1), w = in.dim(2), ch = in.dim(3);
  std::size_t best = 0;
  T best_value = -std::numeric_limits<T>::infinity();
  bool first = true;
  for (std::size_t ky = 0; ky < p.window; ++ky) {
    for (std::size_t kx = 0; kx < p.window; ++kx) {
      const std::size_t iy = oy * p.stride + ky;
      const std::size_t ix = ox * p.stride + kx;
      const std::size_t idx = ((b * h + iy) * w + ix) * ch + c;
      if (first || in[idx] > best_value) {
        best = idx;
        best_value = in[idx];
        first = false;
      }
    }
  }
  return best;
}

template <typename T>
BasicTensor<T> MaxPoolForward(const MaxPool2DParams& p,
                              const BasicTensor<T>& in) {
  const std::size_t batch = in.dim(0), h = in.dim(1), w = in.dim(2),
                    c = in.dim(3);
  const std::size_t oh = (h - p.window) / p.stride + 1;
  const std::size_t ow = (w - p.window) / p.stride + 1;
  BasicTensor<T> out(Shape{batch, oh, ow, c});
  std::size_t o = 0;
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox) {
        for (std::size_t ch = 0; ch < c; ++ch) {
          out[o++] = in[PoolArgMax(in, p, b, oy, ox, ch)];
        }
      }
    }
  }
  return out;
}

template <typename T>
BasicTensor<T> SoftmaxForward(const BasicTensor<T>& in) {
  BasicTensor<T> out(in.shape());
  const std::size_t n = in.row_size();
  for (std::size_t b = 0; b < in.dim(0); ++b) {
    auto x = in.row(b);
    auto y = out.row(b);
    const double peak = *std::max_element(x.begin(), x.end());
    double total = 0.0;
    std::vector<double> e(n);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = std::exp(static_cast<double>(x[j]) - peak);
      total += e[j];
    }
    for (std::size_t j = 0; j < n; ++j) y[j] = static_cast<T>(e[j] / total);
  }
  return out;
}

template <typename T>
BasicTensor<T> ForwardImpl(const Layer& layer, const BasicTensor<T>& in,
                           std::span<const BasicTensor<T>> weights) {
  switch (layer.kind()) {
    case LayerKind::kConv2D:
      return ConvForward(layer.conv(), in, weights[0], weights[1]);
    case LayerKind::kDense:
      return DenseForward(in, weights[0], weights[1]);
    case LayerKind::kReLU:
      return ReluForward(in);
    case LayerKind::kMaxPool2D:
      return MaxPoolForward(layer.pool(), in);
    case LayerKind::kFlatten:
      return BasicTensor<T>(Shape{in.dim(0), in.row_size()}, in.storage());
    case LayerKind::kSoftmax:
      return SoftmaxForward(in);
  }
  return in;
}

float GlorotLimit(std::size_t fan_in, std::size_t fan_out) {
  return static_cast<float>(
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)));
}

}  // namespace

const char* LayerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv2D:
      return "Conv2D";
    case LayerKind::kDense:
      return "Dense";
    case LayerKind::kReLU:
      return "ReLU";
    case LayerKind::kMaxPool2D:
      return "MaxPool2D";
    case LayerKind::kFlatten:
      return "Flatten";
    case LayerKind::kSoftmax:
      return "Softmax";
  }
  return "Unknown";
}

Layer Layer::Conv2D(std::uint32_t out_channels, std::uint32_t kernel_h,
                    std::uint32_t kernel_w, std::uint32_t stride,
                    std::uint32_t padding) {
  return Layer(LayerKind::kConv2D,
               Conv2DParams{out_channels, kernel_h, kernel_w, stride, padding});
}
Layer Layer::Dense(std::uint32_t out_features) {
  return Layer(LayerKind::kDense, DenseParams{out_features});
}
Layer Layer::ReLU() { return Layer(LayerKind::kReLU, std::monostate{}); }
Layer Layer::MaxPool2D(std::uint32_t window, std::uint32_t stride) {
  return Layer(LayerKind::kMaxPool2D, MaxPool2DParams{window, stride});
}
Layer Layer::Flatten() { return Layer(LayerKind::kFlatten, std::monostate{}); }
Layer Layer::Softmax() { return Layer(LayerKind::kSoftmax, std::monostate{}); }

std::size_t Layer::EncodedParamCount(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv2D:
      return 5;
    case LayerKind::kDense:
      return 1;
    case LayerKind::kMaxPool2D:
      return 2;
    default:
      return 0;
  }
}

std::vector<std::uint32_t> Layer::EncodedParams() const {
  switch (kind_) {
    case LayerKind::kConv2D: {
      const auto& c = conv();
      return {c.out_channels, c.kernel_h, c.kernel_w, c.stride, c.padding};
    }
    case LayerKind::kDense:
      return {dense().out_features};
    case LayerKind::kMaxPool2D:
      return {pool().window, pool().stride};
    default:
      return {};
  }
}

absl::StatusOr<Layer> Layer::FromEncoded(LayerKind kind,
                                         std::span<const std::uint32_t> p) {
  if (p.size() != EncodedParamCount(kind)) {
    return absl::InvalidArgumentError(
        absl::StrCat(LayerKindName(kind), " expects ", EncodedParamCount(kind),
                     " parameters, got ", p.size()));
  }
  switch (kind) {
    case LayerKind::kConv2D:
      if (p[0] == 0 || p[1] == 0 || p[2] == 0 || p[3] == 0) {
        return absl::InvalidArgumentError(
            "Conv2D channels, kernel and stride must be positive");
      }
      return Conv2D(p[0], p[1], p[2], p[3], p[4]);
    case LayerKind::kDense:
      if (p[0] == 0) {
        return absl::InvalidArgumentError(
            "Dense out_features must be positive");
      }
      return Dense(p[0]);
    case LayerKind::kMaxPool2D:
      if (p[0] == 0 || p[1] == 0) {
        return absl::InvalidArgumentError(
            "MaxPool2D window and stride must be positive");
      }
      return MaxPool2D(p[0], p[1]);
    case LayerKind::kReLU:
      return ReLU();
    case LayerKind::kFlatten:
      return Flatten();
    case LayerKind::kSoftmax:
      return Softmax();
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown layer kind tag ", static_cast<int>(kind)));
}

absl::StatusOr<Shape> Layer::OutputShape(const Shape& in) const {
  auto mismatch = [&](const char* want) {
    return absl::InvalidArgumentError(
        absl::StrCat(LayerKindName(kind_), " expects ", want,
                     " input, got shape ", ShapeToString(in)));
  };
  switch (kind_) {
    case LayerKind::kConv2D: {
      if (in.size() != 3) return mismatch("[H,W,C]");
      const auto& c = conv();
      if (in[0] + 2 * c.padding < c.kernel_h ||
          in[1] + 2 * c.padding < c.kernel_w) {
        return mismatch("spatial extent >= kernel");
      }
      return Shape{(in[0] + 2 * c.padding - c.kernel_h) / c.stride + 1,
                   (in[1] + 2 * c.padding - c.kernel_w) / c.stride + 1,
                   c.out_channels};
    }
    case LayerKind::kDense:
      if (in.size() != 1) return mismatch("[features]");
      return Shape{dense().out_features};
    case LayerKind::kMaxPool2D: {
      if (in.size() != 3) return mismatch("[H,W,C]");
      const auto& p = pool();
      if (in[0] < p.window || in[1] < p.window) {
        return mismatch("spatial extent >= window");
      }
      return Shape{(in[0] - p.window) / p.stride + 1,
                   (in[1] - p.window) / p.stride + 1, in[2]};
    }
    case LayerKind::kFlatten:
      return Shape{NumElements(in)};
    case LayerKind::kReLU:
      return in;
    case LayerKind::kSoftmax:
      if (in.size() != 1) return mismatch("[classes]");
      return in;
  }
  return mismatch("known layer kind");
}

std::vector<Shape> Layer::WeightShapes(const Shape& in) const {
  switch (kind_) {
    case LayerKind::kConv2D: {
      const auto& c = conv();
      return {Shape{c.kernel_h, c.kernel_w, in.at(2), c.out_channels},
              Shape{c.out_channels}};
    }
    case LayerKind::kDense:
      return {Shape{in.at(0), dense().out_features},
              Shape{dense().out_features}};
    default:
      return {};
  }
}

void Layer::InitializeWeights(const Shape& in, Rng& rng) {
  weights_.clear();
  std::vector<Shape> shapes = WeightShapes(in);
  if (shapes.empty()) return;
  std::size_t fan_in = 0, fan_out = 0;
  if (kind_ == LayerKind::kConv2D) {
    const auto& c = conv();
    fan_in = in.at(2) * c.kernel_h * c.kernel_w;
    fan_out = c.out_channels * c.kernel_h * c.kernel_w;
  } else {
    fan_in = in.at(0);
    fan_out = dense().out_features;
  }
  const double limit = GlorotLimit(fan_in, fan_out);
  Tensor kernel(shapes[0]);
  for (float& v : kernel.data()) {
    v = static_cast<float>(rng.Uniform(-limit, limit));
  }
  weights_.push_back(std::move(kernel));
  weights_.emplace_back(shapes[1]);
}

Tensor Layer::Forward(const Tensor& input) const {
  return ForwardImpl<float>(*this, input, weights_);
}

TensorD Layer::ForwardReference(const TensorD& input,
                                std::span<const TensorD> weights) const {
  return ForwardImpl<double>(*this, input, weights);
}

Tensor Layer::Backward(const Tensor& input, const Tensor& output,
                       const Tensor& grad_output,
                       std::span<Tensor> weight_grads) const {
  Tensor grad_in(input.shape());
  switch (kind_) {
    case LayerKind::kConv2D: {
      const ConvGeometry g = Geometry(conv(), input.shape());
      const float* x = input.data().data();
      const float* k = weights_[0].data().data();
      const float* go = grad_output.data().data();
      float* gx = grad_in.data().data();
      float* gk = weight_grads[0].data().data();
      float* gb = weight_grads[1].data().data();
      for (std::size_t b = 0; b < g.batch; ++b) {
        for (std::size_t oy = 0; oy < g.out_h; ++oy) {
          for (std::size_t ox = 0; ox < g.out_w; ++ox) {
            const float* pg =
                go + ((b * g.out_h + oy) * g.out_w + ox) * g.out_c;
            for (std::size_t co = 0; co < g.out_c; ++co) gb[co] += pg[co];
            for (std::size_t ky = 0; ky < g.kh; ++ky) {
              std::size_t iy;
              if (!SourceIndex(oy, ky, g.stride, g.pad, g.in_h, &iy)) continue;
              for (std::size_t kx = 0; kx < g.kw; ++kx) {
                std::size_t ix;
                if (!SourceIndex(ox, kx, g.stride, g.pad, g.in_w, &ix)) {
                  continue;
                }
                const std::size_t xo =
                    ((b * g.in_h + iy) * g.in_w + ix) * g.in_c;
                const std::size_t ko = (ky * g.kw + kx) * g.in_c * g.out_c;
                for (std::size_t ci = 0; ci < g.in_c; ++ci) {
                  const float v = x[xo + ci];
                  const float* row = k + ko + ci * g.out_c;
                  float* grow = gk + ko + ci * g.out_c;
                  float sum = 0.0f;
                  for (std::size_t co = 0; co < g.out_c; ++co) {
                    sum += row[co] * pg[co];
                    grow[co] += v * pg[co];
                  }
                  gx[xo + ci] += sum;
                }
              }
            }
          }
        }
      }
      break;
    }
    case LayerKind::kDense: {
      const std::size_t batch = input.dim(0);
      const std::size_t d_in = weights_[0].dim(0);
      const std::size_t d_out = weights_[0].dim(1);
      const float* w = weights_[0].data().data();
      float* gw = weight_grads[0].data().data();
      float* gb = weight_grads[1].data().data();
      for (std::size_t b = 0; b < batch; ++b) {
        auto x = input.row(b);
        auto g = grad_output.row(b);
        auto gx = grad_in.row(b);
        for (std::size_t j = 0; j < d_out; ++j) gb[j] += g[j];
        for (std::size_t i = 0; i < d_in; ++i) {
          const float* row = w + i * d_out;
          float* grow = gw + i * d_out;
          double sum = 0.0;
          for (std::size_t j = 0; j < d_out; ++j) {
            sum += static_cast<double>(row[j]) * g[j];
            grow[j] += x[i] * g[j];
          }
          gx[i] = static_cast<float>(sum);
        }
      }
      break;
    }
    case LayerKind::kReLU:
      for (std::size_t i = 0; i < input.size(); ++i) {
        grad_in[i] = input[i] > 0.0f ? grad_output[i] : 0.0f;
      }
      break;
    case LayerKind::kMaxPool2D: {
      const auto& p = pool();
      const std::size_t oh = output.dim(1), ow = output.dim(2),
                        c = output.dim(3);
      std::size_t o = 0;
      for (std::size_t b = 0; b < output.dim(0); ++b) {
        for (std::size_t oy = 0; oy < oh; ++oy) {
          for (std::size_t ox = 0; ox < ow; ++ox) {
            for (std::size_t ch = 0; ch < c; ++ch) {
              grad_in[PoolArgMax(input, p, b, oy, ox, ch)] += grad_output[o++];
            }
          }
        }
      }
      break;
    }
    case LayerKind::kFlatten:
      grad_in.storage() = grad_output.storage();
      break;
    case LayerKind::kSoftmax: {
      const std::size_t n = output.row_size();
      for (std::size_t b = 0; b < output.dim(0); ++b) {
        auto y = output.row(b);
        auto g = grad_output.row(b);
        auto gx = grad_in.row(b);
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          dot += static_cast<double>(g[j]) * y[j];
        }
        for (std::size_t j = 0; j < n; ++j) {
          gx[j] = static_cast<float>(y[j] * (g[j] - dot));
        }
      }
      break;
    }
  }
  return grad_in;
}

std::uint64_t Layer::FlopsPerSample(const Shape& in) const {
  auto out = OutputShape(in);
  if (!out.ok()) return 0;
  const std::uint64_t out_elems = NumElements(*out);
  switch (kind_) {
    case LayerKind::kConv2D: {
      const auto& c = conv();
      const std::uint64_t positions = (*out)[0] * (*out)[1];
      return positions * 2ULL * c.out_channels * in.at(2) * c.kernel_h *
             c.kernel_w;
    }
    case LayerKind::kDense:
      return out_elems * 2ULL * in.at(0);
    default:
      return out_elems;
  }
}

}  // namespace splitpriv
