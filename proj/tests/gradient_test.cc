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

#include <cstdint>

#include "gtest/gtest.h"
#include "splitpriv/classifier.h"
#include "splitpriv/layer.h"
#include "splitpriv/network.h"
#include "support/gradient_oracle.h"

namespace splitpriv {
namespace {

using test_support::CheckContrastiveGradients;
using test_support::CheckLayerGradients;
using test_support::CheckNetworkGradients;
using test_support::GradCheckReport;

void ExpectPasses(const GradCheckReport& r) {
  EXPECT_TRUE(r.ok()) << r.failures << " of " << r.checked
                      << " coordinates failed; worst " << r.worst_coordinate
                      << " ratio " << r.worst_ratio;
}

class LayerGradientTest : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(LayerGradientTest, Conv2D) {
  ExpectPasses(CheckLayerGradients(Layer::Conv2D(3, 3, 3, 1, 1), {5, 5, 2}, 2,
                                   GetParam()));
  ExpectPasses(CheckLayerGradients(Layer::Conv2D(2, 2, 3, 2, 0), {6, 7, 1}, 2,
                                   GetParam()));
}

TEST_P(LayerGradientTest, Dense) {
  ExpectPasses(CheckLayerGradients(Layer::Dense(4), {6}, 3, GetParam()));
}

TEST_P(LayerGradientTest, ReLU) {
  ExpectPasses(CheckLayerGradients(Layer::ReLU(), {7}, 2, GetParam()));
}

TEST_P(LayerGradientTest, MaxPool2D) {
  ExpectPasses(
      CheckLayerGradients(Layer::MaxPool2D(2, 2), {4, 4, 2}, 2, GetParam()));
  ExpectPasses(
      CheckLayerGradients(Layer::MaxPool2D(2, 1), {3, 3, 1}, 2, GetParam()));
}

TEST_P(LayerGradientTest, Flatten) {
  ExpectPasses(CheckLayerGradients(Layer::Flatten(), {2, 3, 2}, 2, GetParam()));
}

TEST_P(LayerGradientTest, Softmax) {
  ExpectPasses(CheckLayerGradients(Layer::Softmax(), {5}, 3, GetParam()));
}

TEST_P(LayerGradientTest, ContrastiveLoss) {
  ExpectPasses(CheckContrastiveGradients(6, GetParam()));
}

TEST_P(LayerGradientTest, SmallNetworkEndToEnd) {
  auto net = Network::Initialize(
      {6, 6, 1},
      {Layer::Conv2D(2, 3, 3, 1, 1), Layer::ReLU(), Layer::MaxPool2D(2, 2),
       Layer::Flatten(), Layer::Dense(3), Layer::ReLU(), Layer::Dense(2),
       Layer::Softmax()},
      GetParam());
  ASSERT_TRUE(net.ok());
  const GradCheckReport r = CheckNetworkGradients(*net, 2, GetParam(), 1000);
  ExpectPasses(r);
  EXPECT_LT(r.skipped, r.checked / 10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, LayerGradientTest,
                         ::testing::Range<std::uint64_t>(1, 11));

TEST(NetworkGradientTest, DeskScaleClassifierSampled) {
  auto net = MakeDeskScaleClassifier(3, 5);
  ASSERT_TRUE(net.ok());
  ExpectPasses(CheckNetworkGradients(*net, 2, 5, 6));
}

TEST(GradientOracleTest, ToleranceRatioUsesFloorAndRelativeBound) {
  EXPECT_LE(test_support::ToleranceRatio(1e-7, 5e-6), 1.0);
  EXPECT_LE(test_support::ToleranceRatio(1.0, 1.0009), 1.0);
  EXPECT_GT(test_support::ToleranceRatio(1.0, 1.002), 1.0);
}

}  // namespace
}  // namespace splitpriv
