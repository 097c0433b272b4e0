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

#ifndef SPLITPRIV_PRIVACY_METRIC_H_
#define SPLITPRIV_PRIVACY_METRIC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

// Adversary knowledge and observations for the rank privacy metric.
//   features / feature_labels: reference vectors f_j with sensitive class
//   points / point_labels:     observed noisy vectors z with true class
// Both tensors are [rows, k]. Every class in [0, num_classes) must own at
// least one reference vector.
struct PrivacyMetricInput {
  Tensor features;
  std::vector<std::uint16_t> feature_labels;
  Tensor points;
  std::vector<std::uint16_t> point_labels;
  double sigma = 0.0;
  std::uint32_t num_classes = 0;

  absl::Status Validate() const;
};

// log P(z | c) = log( (1/N_c) sum_{f in F_c} N(z; f, sigma^2 I) ), one entry
// per class. Evaluated with log-sum-exp.
absl::StatusOr<std::vector<double>> ClassLogLikelihoods(
    std::span<const float> z, const PrivacyMetricInput& input);

absl::StatusOr<double> ClassLikelihood(std::span<const float> z,
                                       std::uint16_t cls,
                                       const PrivacyMetricInput& input);

// Number of classes whose likelihood is strictly greater than that of
// true_class.
std::size_t LikelihoodRank(std::span<const double> likelihoods,
                           std::size_t true_class);

// rank / T for a single point.
absl::StatusOr<double> RankPrivacy(std::span<const float> z,
                                   std::uint16_t true_class,
                                   const PrivacyMetricInput& input);

struct PrivacyResult {
  std::vector<double> per_point;
  double total = 0.0;  // mean of per_point
};

// Rank privacy of every point in input.points.
absl::StatusOr<PrivacyResult> PrivacyTotal(const PrivacyMetricInput& input);

}  // namespace splitpriv

#endif  // SPLITPRIV_PRIVACY_METRIC_H_
