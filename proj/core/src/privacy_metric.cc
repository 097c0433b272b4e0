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
#include <limits>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {

absl::Status PrivacyMetricInput::Validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError("privacy metric needs finite sigma > 0");
  }
  if (num_classes == 0) {
    return absl::InvalidArgumentError("privacy metric needs >= 1 class");
  }
  if (features.rank() != 2 || features.dim(0) != feature_labels.size()) {
    return absl::InvalidArgumentError(
        "reference features must be [M, k] with one label per row");
  }
  if (points.rank() != 2 || points.dim(0) != point_labels.size()) {
    return absl::InvalidArgumentError(
        "points must be [N, k] with one label per row");
  }
  if (points.dim(1) != features.dim(1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("points have dimension ", points.dim(1),
                     ", reference features ", features.dim(1)));
  }
  std::vector<std::size_t> count(num_classes, 0);
  for (std::uint16_t c : feature_labels) {
    if (c >= num_classes) {
      return absl::InvalidArgumentError(
          absl::StrCat("reference label ", c, " >= class count ", num_classes));
    }
    ++count[c];
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (count[c] == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("class ", c, " has no reference features"));
    }
  }
  for (std::uint16_t c : point_labels) {
    if (c >= num_classes) {
      return absl::InvalidArgumentError(
          absl::StrCat("point label ", c, " >= class count ", num_classes));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> ClassLogLikelihoods(
    std::span<const float> z, const PrivacyMetricInput& input) {
  SPLITPRIV_RETURN_IF_ERROR(input.Validate());
  const std::size_t k = input.features.dim(1);
  if (z.size() != k) {
    return absl::InvalidArgumentError(
        absl::StrCat("point has dimension ", z.size(), ", expected ", k));
  }
  const std::size_t t = input.num_classes;
  const double inv_two_var = 1.0 / (2.0 * input.sigma * input.sigma);
  // Per-class running log-sum-exp in the streaming form.
  std::vector<double> peak(t, -std::numeric_limits<double>::infinity());
  std::vector<double> scaled(t, 0.0);
  std::vector<std::size_t> count(t, 0);
  for (std::size_t j = 0; j < input.features.dim(0); ++j) {
    auto f = input.features.row(j);
    double sq = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = static_cast<double>(z[i]) - f[i];
      sq += d * d;
    }
    const double e = -sq * inv_two_var;
    const std::uint16_t c = input.feature_labels[j];
    ++count[c];
    if (e > peak[c]) {
      scaled[c] = scaled[c] * std::exp(peak[c] - e) + 1.0;
      peak[c] = e;
    } else {
      scaled[c] += std::exp(e - peak[c]);
    }
  }
  const double log_norm =
      -0.5 * static_cast<double>(k) *
      std::log(2.0 * std::numbers::pi * input.sigma * input.sigma);
  std::vector<double> out(t);
  for (std::size_t c = 0; c < t; ++c) {
    out[c] = peak[c] + std::log(scaled[c]) -
             std::log(static_cast<double>(count[c])) + log_norm;
  }
  return out;
}

absl::StatusOr<double> ClassLikelihood(std::span<const float> z,
                                       std::uint16_t cls,
                                       const PrivacyMetricInput& input) {
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<double> ll,
                             ClassLogLikelihoods(z, input));
  if (cls >= ll.size()) {
    return absl::InvalidArgumentError(absl::StrCat("class ", cls, " unknown"));
  }
  return std::exp(ll[cls]);
}

std::size_t LikelihoodRank(std::span<const double> likelihoods,
                           std::size_t true_class) {
  const double own = likelihoods[true_class];
  return static_cast<std::size_t>(
      std::count_if(likelihoods.begin(), likelihoods.end(),
                    [own](double v) { return v > own; }));
}

absl::StatusOr<double> RankPrivacy(std::span<const float> z,
                                   std::uint16_t true_class,
                                   const PrivacyMetricInput& input) {
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<double> ll,
                             ClassLogLikelihoods(z, input));
  if (true_class >= ll.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("class ", true_class, " unknown"));
  }
  return static_cast<double>(LikelihoodRank(ll, true_class)) /
         static_cast<double>(input.num_classes);
}

absl::StatusOr<PrivacyResult> PrivacyTotal(const PrivacyMetricInput& input) {
  SPLITPRIV_RETURN_IF_ERROR(input.Validate());
  if (input.points.dim(0) == 0) {
    return absl::InvalidArgumentError("privacy_total needs >= 1 point");
  }
  PrivacyResult result;
  result.per_point.reserve(input.points.dim(0));
  double sum = 0.0;
  for (std::size_t n = 0; n < input.points.dim(0); ++n) {
    SPLITPRIV_ASSIGN_OR_RETURN(
        double p,
        RankPrivacy(input.points.row(n), input.point_labels[n], input));
    result.per_point.push_back(p);
    sum += p;
  }
  result.total = sum / static_cast<double>(result.per_point.size());
  return result;
}

}  // namespace splitpriv
