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

#ifndef SPLITPRIV_PCA_H_
#define SPLITPRIV_PCA_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "splitpriv/tensor.h"

namespace splitpriv {

// Affine projection onto k orthonormal directions of a d-dimensional space.
// Components are stored column-major: column c occupies
// components()[c * d, (c + 1) * d).
class PcaModel {
 public:
  PcaModel() = default;

  // Checks k <= d, sizes, and orthonormality of the columns within 1e-5.
  static absl::StatusOr<PcaModel> Create(std::vector<float> mean,
                                         std::vector<float> components,
                                         std::size_t k);

  std::size_t dim() const { return mean_.size(); }
  std::size_t k() const { return k_; }
  std::span<const float> mean() const { return mean_; }
  std::span<const float> components() const { return components_; }
  std::span<const float> component(std::size_t c) const {
    return std::span<const float>(components_).subspan(c * dim(), dim());
  }

  // Sample-covariance eigenvalues of the kept components (descending) and
  // the total variance; populated by FitPca only.
  const std::vector<double>& explained_variance() const {
    return explained_variance_;
  }
  double total_variance() const { return total_variance_; }
  std::vector<double> ExplainedVarianceRatio() const;

  // y = C^T (f - mean)
  absl::StatusOr<std::vector<float>> Reduce(std::span<const float> f) const;
  // f = C y + mean
  absl::StatusOr<std::vector<float>> Reconstruct(
      std::span<const float> y) const;
  // Row-wise over [N, d] / [N, k] batches.
  absl::StatusOr<Tensor> ReduceBatch(const Tensor& f) const;
  absl::StatusOr<Tensor> ReconstructBatch(const Tensor& y) const;

  friend bool operator==(const PcaModel& a, const PcaModel& b) {
    return a.k_ == b.k_ && a.mean_ == b.mean_ && a.components_ == b.components_;
  }

 private:
  friend absl::StatusOr<PcaModel> FitPca(const Tensor&, std::size_t);

  std::vector<float> mean_;
  std::vector<float> components_;
  std::size_t k_ = 0;
  std::vector<double> explained_variance_;
  double total_variance_ = 0.0;
};

// Top-k eigenvectors of the sample covariance of the rows of features
// ([N, d], N >= k + 1), ordered by descending eigenvalue. Each component is
// sign-normalized so its largest-magnitude entry is positive. Fails when
// k > d or the covariance rank is below k.
absl::StatusOr<PcaModel> FitPca(const Tensor& features, std::size_t k);

}  // namespace splitpriv

#endif  // SPLITPRIV_PCA_H_
