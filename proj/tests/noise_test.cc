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

#include "splitpriv/noise.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gtest/gtest.h"

namespace splitpriv {
namespace {

TEST(NoiseTest, ZeroSigmaIsIdentity) {
  auto noise = NoiseModel::Create(0.0f, 3);
  ASSERT_TRUE(noise.ok());
  const std::vector<float> y = {1.5f, -2.0f, 0.0f};
  EXPECT_EQ(noise->Apply(y, 17), y);
}

TEST(NoiseTest, SameSeedAndDrawGiveSameOutput) {
  auto a = NoiseModel::Create(0.7f, 11);
  auto b = NoiseModel::Create(0.7f, 11);
  const std::vector<float> y(8, 1.0f);
  EXPECT_EQ(a->Apply(y, 4), b->Apply(y, 4));
  EXPECT_NE(a->Apply(y, 4), a->Apply(y, 5));
  auto c = NoiseModel::Create(0.7f, 12);
  EXPECT_NE(a->Apply(y, 4), c->Apply(y, 4));
}

TEST(NoiseTest, EmpiricalStdWithinFivePercent) {
  for (float sigma : {0.01f, 1.0f, 25.0f}) {
    auto noise = NoiseModel::Create(sigma, 2);
    const std::vector<float> y(4, 3.0f);
    std::vector<double> s(4, 0.0), s2(4, 0.0);
    const int n = 10000;
    for (int d = 0; d < n; ++d) {
      const std::vector<float> z = noise->Apply(y, d);
      for (int i = 0; i < 4; ++i) {
        const double e = z[i] - y[i];
        s[i] += e;
        s2[i] += e * e;
      }
    }
    for (int i = 0; i < 4; ++i) {
      const double mean = s[i] / n;
      const double sd = std::sqrt(s2[i] / n - mean * mean);
      EXPECT_NEAR(sd, sigma, 0.05 * sigma)
          << "sigma " << sigma << " coord " << i;
      EXPECT_NEAR(mean, 0.0, 4 * sigma / std::sqrt(n));
    }
  }
}

TEST(NoiseTest, DrawsScaleWithSigma) {
  auto small = NoiseModel::Create(1.0f, 5);
  auto large = NoiseModel::Create(4.0f, 5);
  const std::vector<float> y(6, 0.0f);
  const auto a = small->Apply(y, 9), b = large->Apply(y, 9);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(b[i], 4 * a[i], 1e-5);
}

TEST(NoiseTest, InPlaceMatchesApply) {
  auto noise = NoiseModel::Create(0.3f, 1);
  std::vector<float> y = {1, 2, 3};
  const auto z = noise->Apply(y, 2);
  noise->ApplyInPlace(y, 2);
  EXPECT_EQ(y, z);
}

TEST(NoiseTest, RejectsBadSigma) {
  EXPECT_FALSE(NoiseModel::Create(-0.1f, 1).ok());
  EXPECT_FALSE(
      NoiseModel::Create(std::numeric_limits<float>::quiet_NaN(), 1).ok());
  EXPECT_FALSE(
      NoiseModel::Create(std::numeric_limits<float>::infinity(), 1).ok());
}

}  // namespace
}  // namespace splitpriv
