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

#include "splitpriv/pca.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {
namespace {

constexpr double kOrthonormalTolerance = 1e-5;
constexpr double kRankTolerance = 1e-9;

std::size_t DominantAxis(const Eigen::VectorXd& v) {
  Eigen::Index axis = 0;
  v.cwiseAbs().maxCoeff(&axis);
  return static_cast<std::size_t>(axis);
}

}  // namespace

absl::StatusOr<PcaModel> PcaModel::Create(std::vector<float> mean,
                                          std::vector<float> components,
                                          std::size_t k) {
  const std::size_t d = mean.size();
  if (d == 0 || k == 0) {
    return absl::InvalidArgumentError("PCA needs d >= 1 and k >= 1");
  }
  if (k > d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PCA dimension k=", k, " exceeds feature dimension d=", d));
  }
  if (components.size() != d * k) {
    return absl::InvalidArgumentError(
        absl::StrCat("PCA components hold ", components.size(),
                     " values, need d*k=", d * k));
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        dot +=
            static_cast<double>(components[a * d + i]) * components[b * d + i];
      }
      const double want = a == b ? 1.0 : 0.0;
      if (std::abs(dot - want) > kOrthonormalTolerance) {
        return absl::InvalidArgumentError(
            absl::StrCat("PCA components ", a, " and ", b,
                         " are not orthonormal (dot=", dot, ")"));
      }
    }
  }
  PcaModel m;
  m.mean_ = std::move(mean);
  m.components_ = std::move(components);
  m.k_ = k;
  return m;
}

std::vector<double> PcaModel::ExplainedVarianceRatio() const {
  std::vector<double> ratio;
  for (double v : explained_variance_) {
    ratio.push_back(total_variance_ > 0.0 ? v / total_variance_ : 0.0);
  }
  return ratio;
}

absl::StatusOr<std::vector<float>> PcaModel::Reduce(
    std::span<const float> f) const {
  if (f.size() != dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("reduce expects a ", dim(), "-vector, got ", f.size()));
  }
  std::vector<float> y(k_);
  for (std::size_t c = 0; c < k_; ++c) {
    auto col = component(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      acc += (static_cast<double>(f[i]) - mean_[i]) * col[i];
    }
    y[c] = static_cast<float>(acc);
  }
  return y;
}

absl::StatusOr<std::vector<float>> PcaModel::Reconstruct(
    std::span<const float> y) const {
  if (y.size() != k_) {
    return absl::InvalidArgumentError(
        absl::StrCat("reconstruct expects a ", k_, "-vector, got ", y.size()));
  }
  std::vector<double> acc(mean_.begin(), mean_.end());
  for (std::size_t c = 0; c < k_; ++c) {
    auto col = component(c);
    const double yc = y[c];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += yc * col[i];
  }
  return std::vector<float>(acc.begin(), acc.end());
}

absl::StatusOr<Tensor> PcaModel::ReduceBatch(const Tensor& f) const {
  if (f.rank() != 2) {
    return absl::InvalidArgumentError("ReduceBatch expects an [N, d] tensor");
  }
  std::vector<float> out;
  out.reserve(f.dim(0) * k_);
  for (std::size_t r = 0; r < f.dim(0); ++r) {
    SPLITPRIV_ASSIGN_OR_RETURN(std::vector<float> y, Reduce(f.row(r)));
    out.insert(out.end(), y.begin(), y.end());
  }
  return Tensor(Shape{f.dim(0), k_}, std::move(out));
}

absl::StatusOr<Tensor> PcaModel::ReconstructBatch(const Tensor& y) const {
  if (y.rank() != 2) {
    return absl::InvalidArgumentError(
        "ReconstructBatch expects an [N, k] tensor");
  }
  std::vector<float> out;
  out.reserve(y.dim(0) * dim());
  for (std::size_t r = 0; r < y.dim(0); ++r) {
    SPLITPRIV_ASSIGN_OR_RETURN(std::vector<float> f, Reconstruct(y.row(r)));
    out.insert(out.end(), f.begin(), f.end());
  }
  return Tensor(Shape{y.dim(0), dim()}, std::move(out));
}

absl::StatusOr<PcaModel> FitPca(const Tensor& features, std::size_t k) {
  if (features.rank() != 2) {
    return absl::InvalidArgumentError("FitPca expects an [N, d] tensor");
  }
  const std::size_t n = features.dim(0);
  const std::size_t d = features.dim(1);
  if (k == 0) return absl::InvalidArgumentError("PCA dimension k must be >= 1");
  if (k > d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PCA dimension k=", k, " exceeds feature dimension d=", d));
  }
  if (n < k + 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("FitPca needs at least k+1=", k + 1, " samples, got ", n));
  }

  Eigen::MatrixXd x(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = features.row(r);
    for (std::size_t c = 0; c < d; ++c) x(r, c) = row[c];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.adjoint() * x) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    return absl::InternalError("covariance eigendecomposition failed");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> axis(d);
  for (std::size_t i = 0; i < d; ++i) axis[i] = DominantAxis(vectors.col(i));
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values(a) != values(b)) return values(a) > values(b);
    return axis[a] < axis[b];
  });

  const double top = std::max(values(order[0]), 0.0);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (values(i) > kRankTolerance * top && values(i) > 0.0) ++rank;
  }
  if (rank < k) {
    return absl::FailedPreconditionError(absl::StrCat(
        "degenerate features: covariance rank ", rank, " < k=", k));
  }

  PcaModel m;
  m.k_ = k;
  m.mean_.assign(mean.data(), mean.data() + d);
  m.components_.resize(d * k);
  for (std::size_t c = 0; c < k; ++c) {
    Eigen::VectorXd v = vectors.col(order[c]);
    if (v(DominantAxis(v)) < 0.0) v = -v;
    for (std::size_t i = 0; i < d; ++i) {
      m.components_[c * d + i] = static_cast<float>(v(i));
    }
    m.explained_variance_.push_back(values(order[c]));
  }
  m.total_variance_ = std::max(cov.trace(), 0.0);
  return m;
}

}  // namespace splitpriv
