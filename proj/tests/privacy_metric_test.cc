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

#include "splitpriv/privacy_metric.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "splitpriv/rng.h"
#include "support/privacy_oracle.h"

namespace splitpriv {
namespace {

using test_support::BruteForceLikelihood;
using test_support::ClusterInstance;
using test_support::SmallInstance;
using test_support::SmallInstanceRank;
using ::testing::HasSubstr;

PrivacyMetricInput OneMember(double sigma, std::size_t k) {
  PrivacyMetricInput in;
  in.num_classes = 1;
  in.sigma = sigma;
  in.features = Tensor({1, k}, 0.5f);
  in.feature_labels = {0};
  in.points = Tensor({1, k}, 0.5f);
  in.point_labels = {0};
  return in;
}

TEST(ClassLikelihoodTest, SingleMemberAtItsFeatureIsThePeakDensity) {
  for (double sigma : {0.3, 1.0, 2.0}) {
    for (std::size_t k : {1u, 2u, 5u}) {
      PrivacyMetricInput in = OneMember(sigma, k);
      auto v = ClassLikelihood(in.points.row(0), 0, in);
      ASSERT_TRUE(v.ok()) << v.status();
      const double want =
          std::pow(2 * std::numbers::pi * sigma * sigma, -0.5 * k);
      EXPECT_NEAR(*v / want, 1.0, 1e-12) << sigma << " " << k;
    }
  }
}

TEST(ClassLikelihoodTest, SymmetricClassesAreEquallyLikely) {
  PrivacyMetricInput in;
  in.num_classes = 2;
  in.sigma = 0.7;
  in.features = Tensor({4, 2}, std::vector<float>{-1, 0, -2, 1, 1, 0, 2, 1});
  in.feature_labels = {0, 0, 1, 1};
  in.points = Tensor({0, 2});
  std::vector<float> z = {0.0f, 0.25f};
  auto ll = ClassLogLikelihoods(z, in);
  ASSERT_TRUE(ll.ok());
  EXPECT_NEAR((*ll)[0], (*ll)[1], 1e-9);
  // Equal likelihoods tie, and a tie does not count against the true class.
  EXPECT_EQ(LikelihoodRank(*ll, 0), 0u);
  EXPECT_EQ(LikelihoodRank(*ll, 1), 0u);
}

TEST(LikelihoodRankTest, Examples) {
  const std::vector<double> l = {0.5, 0.3, 0.2};
  EXPECT_EQ(LikelihoodRank(l, 0), 0u);
  EXPECT_EQ(LikelihoodRank(l, 1), 1u);
  EXPECT_EQ(LikelihoodRank(l, 2), 2u);
  EXPECT_DOUBLE_EQ(LikelihoodRank(l, 1) / 3.0, 1.0 / 3.0);
}

TEST(RankPrivacyTest, UniqueMaxAndUniqueMin) {
  PrivacyMetricInput in = SmallInstance();
  auto best = RankPrivacy(in.points.row(0), 0, in);
  auto worst = RankPrivacy(in.points.row(0), 2, in);
  ASSERT_TRUE(best.ok() && worst.ok());
  EXPECT_EQ(*best, 0.0);
  EXPECT_DOUBLE_EQ(*worst, 2.0 / 3.0);
}

TEST(ClassLikelihoodTest, MatchesBruteForceOracle) {
  PrivacyMetricInput in = SmallInstance();
  for (std::size_t n = 0; n < in.points.dim(0); ++n) {
    auto z = in.points.row(n);
    for (std::uint16_t c = 0; c < 3; ++c) {
      auto v = ClassLikelihood(z, c, in);
      ASSERT_TRUE(v.ok());
      const long double want = BruteForceLikelihood(z, c, in);
      EXPECT_NEAR(*v / static_cast<double>(want), 1.0, 1e-10) << n << " " << c;
    }
  }
}

TEST(ClassLikelihoodTest, MatchesBruteForceOnRandomInstances) {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    PrivacyMetricInput in = ClusterInstance(
        4, 3, 5, 10, 2.0, 0.8, rng.Uniform(0.3, 2.0), 1000 + trial);
    for (std::size_t n = 0; n < in.points.dim(0); ++n) {
      for (std::uint16_t c = 0; c < 4; ++c) {
        auto v = ClassLikelihood(in.points.row(n), c, in);
        ASSERT_TRUE(v.ok());
        const long double want = BruteForceLikelihood(in.points.row(n), c, in);
        EXPECT_NEAR(*v / static_cast<double>(want), 1.0, 1e-10);
      }
    }
  }
}

TEST(ClassLikelihoodTest, FarPointsDoNotUnderflow) {
  // Linear-space densities underflow here; the log form must still rank.
  PrivacyMetricInput in = SmallInstance();
  in.sigma = 0.01;
  std::vector<float> z = {0.4f, 0.0f};
  auto ll = ClassLogLikelihoods(z, in);
  ASSERT_TRUE(ll.ok());
  for (double v : *ll) EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT((*ll)[0], (*ll)[1]);
  EXPECT_GT((*ll)[1], (*ll)[2]);
}

TEST(PrivacyTotalTest, MatchesHandCountedRanks) {
  PrivacyMetricInput in = SmallInstance();
  auto r = PrivacyTotal(in);
  ASSERT_TRUE(r.ok()) << r.status();
  double sum = 0.0;
  for (std::size_t n = 0; n < 12; ++n) {
    const double want = SmallInstanceRank(n / 3, in.point_labels[n]) / 3.0;
    EXPECT_DOUBLE_EQ(r->per_point[n], want) << n;
    sum += want;
  }
  EXPECT_DOUBLE_EQ(r->total, sum / 12);
  // Each point carries every label once, so ranks 0, 1, 2 each appear once.
  EXPECT_DOUBLE_EQ(r->total, 1.0 / 3.0);
}

TEST(PrivacyTotalTest, AllRankZeroGivesZero) {
  PrivacyMetricInput in = SmallInstance();
  std::vector<float> data;
  in.point_labels.clear();
  const float pts[3][2] = {{0.1f, 0}, {1.1f, 0.1f}, {2.4f, -0.1f}};
  for (std::uint16_t c = 0; c < 3; ++c) {
    data.insert(data.end(), {pts[c][0], pts[c][1]});
    in.point_labels.push_back(c);
  }
  in.points = Tensor({3, 2}, data);
  auto r = PrivacyTotal(in);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->total, 0.0);
}

class PrivacyPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(PrivacyPropertyTest, ValuesAreRankFractions) {
  const std::uint32_t t = 5;
  PrivacyMetricInput in =
      ClusterInstance(t, 3, 4, 60, 1.0, 1.0, 0.8, GetParam());
  auto r = PrivacyTotal(in);
  ASSERT_TRUE(r.ok());
  for (double p : r->per_point) {
    const double scaled = p * t;
    EXPECT_NEAR(scaled, std::round(scaled), 1e-12);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, (t - 1.0) / t);
  }
}

TEST_P(PrivacyPropertyTest, RelabellingPermutesTheRanks) {
  const std::uint32_t t = 4;
  PrivacyMetricInput in =
      ClusterInstance(t, 2, 3, 40, 1.5, 0.7, 0.6, GetParam());
  std::vector<std::uint16_t> perm = {0, 1, 2, 3};
  Rng rng(GetParam());
  rng.Shuffle(perm);
  PrivacyMetricInput moved = in;
  for (auto& c : moved.feature_labels) c = perm[c];
  for (auto& c : moved.point_labels) c = perm[c];
  auto a = PrivacyTotal(in);
  auto b = PrivacyTotal(moved);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->per_point, b->per_point);
}

TEST_P(PrivacyPropertyTest, ScalingFeaturesAndSigmaTogetherKeepsRanks) {
  PrivacyMetricInput in =
      ClusterInstance(6, 4, 3, 50, 1.0, 0.9, 0.9, GetParam());
  auto base = PrivacyTotal(in);
  ASSERT_TRUE(base.ok());
  for (double s : {0.5, 2.0, 3.0}) {
    PrivacyMetricInput scaled = in;
    for (float& v : scaled.features.data()) v = static_cast<float>(v * s);
    for (float& v : scaled.points.data()) v = static_cast<float>(v * s);
    scaled.sigma = in.sigma * s;
    auto r = PrivacyTotal(scaled);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r->per_point, base->per_point) << s;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, PrivacyPropertyTest, ::testing::Range(1, 6));

TEST(PrivacyLimitTest, DrownedFeaturesGiveUniformRank) {
  for (std::uint32_t t : {5u, 20u}) {
    PrivacyMetricInput in =
        ClusterInstance(t, 8, 4, 2000, 1.0, 1000.0, 1000.0, 77 + t);
    auto r = PrivacyTotal(in);
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(r->total, (t - 1.0) / (2.0 * t), 0.05) << t;
  }
}

TEST(PrivacyLimitTest, TinySigmaWithSeparatedClustersGivesZero) {
  PrivacyMetricInput in = ClusterInstance(20, 8, 4, 1000, 5.0, 1e-3, 1e-3, 3);
  auto r = PrivacyTotal(in);
  ASSERT_TRUE(r.ok());
  EXPECT_LE(r->total, 0.02);
}

TEST(PrivacyMetricErrorsTest, Rejected) {
  PrivacyMetricInput in = SmallInstance();
  ASSERT_TRUE(in.Validate().ok());

  PrivacyMetricInput empty_class = in;
  empty_class.num_classes = 4;
  EXPECT_THAT(PrivacyTotal(empty_class).status().message(),
              HasSubstr("class 3 has no reference features"));

  PrivacyMetricInput no_points = in;
  no_points.points = Tensor({0, 2});
  no_points.point_labels.clear();
  EXPECT_EQ(PrivacyTotal(no_points).status().code(),
            absl::StatusCode::kInvalidArgument);

  PrivacyMetricInput bad_dim = in;
  bad_dim.points = Tensor({12, 3});
  EXPECT_EQ(PrivacyTotal(bad_dim).status().code(),
            absl::StatusCode::kInvalidArgument);
  std::vector<float> z3 = {0, 0, 0};
  EXPECT_FALSE(ClassLogLikelihoods(z3, in).ok());

  for (double sigma : {0.0, -1.0, std::nan("")}) {
    PrivacyMetricInput bad_sigma = in;
    bad_sigma.sigma = sigma;
    EXPECT_EQ(PrivacyTotal(bad_sigma).status().code(),
              absl::StatusCode::kInvalidArgument);
  }

  PrivacyMetricInput bad_label = in;
  bad_label.point_labels[0] = 9;
  EXPECT_FALSE(PrivacyTotal(bad_label).ok());
  EXPECT_FALSE(RankPrivacy(in.points.row(0), 7, in).ok());
}

}  // namespace
}  // namespace splitpriv
