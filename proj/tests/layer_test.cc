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

#include <cstdint>
#include <vector>

#include "gtest/gtest.h"
#include "splitpriv/rng.h"
#include "splitpriv/tensor.h"

namespace splitpriv {
namespace {

// Naive direct convolution, written independently of the library kernel.
Tensor OracleConv(const Tensor& x, const Tensor& k, const Tensor& bias,
                  int stride, int pad) {
  const int n = x.dim(0), h = x.dim(1), w = x.dim(2), ci = x.dim(3);
  const int kh = k.dim(0), kw = k.dim(1), co = k.dim(3);
  const int oh = (h + 2 * pad - kh) / stride + 1;
  const int ow = (w + 2 * pad - kw) / stride + 1;
  Tensor out(Shape{static_cast<std::size_t>(n), static_cast<std::size_t>(oh),
                   static_cast<std::size_t>(ow), static_cast<std::size_t>(co)});
  for (int b = 0; b < n; ++b)
    for (int y = 0; y < oh; ++y)
      for (int xx = 0; xx < ow; ++xx)
        for (int o = 0; o < co; ++o) {
          double acc = bias[o];
          for (int dy = 0; dy < kh; ++dy)
            for (int dx = 0; dx < kw; ++dx) {
              const int iy = y * stride + dy - pad;
              const int ix = xx * stride + dx - pad;
              if (iy < 0 || ix < 0 || iy >= h || ix >= w) continue;
              for (int c = 0; c < ci; ++c) {
                acc +=
                    static_cast<double>(x[((b * h + iy) * w + ix) * ci + c]) *
                    k[((dy * kw + dx) * ci + c) * co + o];
              }
            }
          out[((b * oh + y) * ow + xx) * co + o] = static_cast<float>(acc);
        }
  return out;
}

TEST(LayerTest, DenseIdentity) {
  Layer dense = Layer::Dense(1);
  dense.weights() = {Tensor({1, 1}, std::vector<float>{1.0f}),
                     Tensor({1}, std::vector<float>{0.0f})};
  Tensor y = dense.Forward(Tensor({1, 1}, std::vector<float>{3.0f}));
  EXPECT_EQ(y.storage(), (std::vector<float>{3.0f}));
}

TEST(LayerTest, ReluClampsNegatives) {
  Tensor y =
      Layer::ReLU().Forward(Tensor({1, 3}, std::vector<float>{-1, 0, 2}));
  EXPECT_EQ(y.storage(), (std::vector<float>{0, 0, 2}));
}

TEST(LayerTest, MaxPoolStrideOneOnThreeByThree) {
  Tensor x({1, 3, 3, 1}, std::vector<float>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  Tensor y = Layer::MaxPool2D(2, 1).Forward(x);
  EXPECT_EQ(y.shape(), (Shape{1, 2, 2, 1}));
  EXPECT_EQ(y.storage(), (std::vector<float>{5, 6, 8, 9}));
}

TEST(LayerTest, SoftmaxRowsSumToOneAndResistOverflow) {
  Tensor y = Layer::Softmax().Forward(
      Tensor({2, 3}, std::vector<float>{1000, 1000, 1000, 0, 0, 1}));
  EXPECT_NEAR(y[0], 1.0 / 3, 1e-7);
  double s = 0;
  for (std::size_t j = 3; j < 6; ++j) s += y[j];
  EXPECT_NEAR(s, 1.0, 1e-6);
  EXPECT_GT(y[5], y[4]);
}

TEST(LayerTest, ConvMatchesDirectOracle) {
  struct Case {
    std::uint32_t out, kh, kw, stride, pad;
    Shape in;
  };
  const Case cases[] = {{4, 3, 3, 1, 1, {2, 6, 5, 3}},
                        {2, 2, 3, 2, 0, {1, 7, 7, 2}},
                        {3, 1, 1, 1, 0, {2, 3, 3, 4}},
                        {2, 3, 3, 2, 1, {1, 5, 6, 1}}};
  Rng rng(11);
  for (const Case& c : cases) {
    Layer conv = Layer::Conv2D(c.out, c.kh, c.kw, c.stride, c.pad);
    const Shape sample(c.in.begin() + 1, c.in.end());
    conv.InitializeWeights(sample, rng);
    for (float& v : conv.weights()[1].data()) {
      v = static_cast<float>(rng.Uniform(-1, 1));
    }
    Tensor x(c.in);
    for (float& v : x.data()) v = static_cast<float>(rng.Uniform(-1, 1));
    const Tensor got = conv.Forward(x);
    const Tensor want =
        OracleConv(x, conv.weights()[0], conv.weights()[1], c.stride, c.pad);
    ASSERT_EQ(got.shape(), want.shape());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_NEAR(got[i], want[i], 1e-5) << i;
    }
  }
}

TEST(LayerTest, OutputShapeDiagnosesMismatch) {
  auto s = Layer::Dense(4).OutputShape({2, 3});
  ASSERT_FALSE(s.ok());
  EXPECT_NE(s.status().message().find("[2,3]"), std::string::npos);
  EXPECT_FALSE(Layer::Conv2D(1, 5, 5).OutputShape({3, 3, 1}).ok());
  EXPECT_FALSE(Layer::MaxPool2D(2, 2).OutputShape({1, 4, 1}).ok());
  EXPECT_EQ(*Layer::Flatten().OutputShape({2, 3, 4}), (Shape{24}));
  EXPECT_EQ(*Layer::Conv2D(8, 3, 3, 1, 1).OutputShape({16, 16, 1}),
            (Shape{16, 16, 8}));
}

TEST(LayerTest, EncodedParamsRoundTrip) {
  const Layer layers[] = {
      Layer::Conv2D(8, 3, 2, 2, 1), Layer::Dense(5),  Layer::ReLU(),
      Layer::MaxPool2D(3, 2),       Layer::Flatten(), Layer::Softmax()};
  for (const Layer& l : layers) {
    const std::vector<std::uint32_t> p = l.EncodedParams();
    EXPECT_EQ(p.size(), Layer::EncodedParamCount(l.kind()));
    auto back = Layer::FromEncoded(l.kind(), p);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_TRUE(*back == l);
  }
  const std::uint32_t zero_stride[] = {8, 3, 3, 0, 0};
  EXPECT_FALSE(Layer::FromEncoded(LayerKind::kConv2D, zero_stride).ok());
}

TEST(LayerTest, GlorotInitIsBoundedAndSeeded) {
  Layer a = Layer::Dense(10), b = Layer::Dense(10);
  Rng r1(5), r2(5);
  a.InitializeWeights({20}, r1);
  b.InitializeWeights({20}, r2);
  EXPECT_TRUE(a == b);
  const float limit = std::sqrt(6.0f / 30.0f);
  for (float v : a.weights()[0].data()) EXPECT_LE(std::abs(v), limit);
  for (float v : a.weights()[1].data()) EXPECT_EQ(v, 0.0f);
}

TEST(LayerTest, FlopsFollowTheCountingRule) {
  // 16x16 output positions * 2 * 8 * 1 * 3 * 3
  EXPECT_EQ(Layer::Conv2D(8, 3, 3, 1, 1).FlopsPerSample({16, 16, 1}),
            16u * 16 * 2 * 8 * 9);
  EXPECT_EQ(Layer::Dense(32).FlopsPerSample({256}), 32u * 2 * 256);
  EXPECT_EQ(Layer::MaxPool2D(2, 2).FlopsPerSample({16, 16, 8}), 8u * 8 * 8);
  EXPECT_EQ(Layer::ReLU().FlopsPerSample({10}), 10u);
}

TEST(LayerTest, MaxPoolBackwardRoutesToFirstMaximum) {
  Layer pool = Layer::MaxPool2D(2, 2);
  Tensor x({1, 2, 2, 1}, std::vector<float>{3, 7, 7, 1});
  Tensor y = pool.Forward(x);
  Tensor g =
      pool.Backward(x, y, Tensor({1, 1, 1, 1}, std::vector<float>{2}), {});
  EXPECT_EQ(g.storage(), (std::vector<float>{0, 2, 0, 0}));
}

}  // namespace
}  // namespace splitpriv
