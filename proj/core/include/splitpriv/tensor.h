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

#ifndef SPLITPRIV_TENSOR_H_
#define SPLITPRIV_TENSOR_H_

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace splitpriv {

using Shape = std::vector<std::size_t>;

inline std::size_t NumElements(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

inline std::string ShapeToString(const Shape& shape) {
  return absl::StrCat("[", absl::StrJoin(shape, ","), "]");
}

// Dense row-major n-dimensional array. Storage is float for every tensor that
// flows through models, files and the wire; the double instantiation exists
// for high-precision reference evaluation.
template <typename T>
class BasicTensor {
 public:
  using value_type = T;

  BasicTensor() = default;
  explicit BasicTensor(Shape shape, T fill = T{0})
      : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}

  // Caller guarantees NumElements(shape) == data.size(); use Create() for
  // untrusted input.
  BasicTensor(Shape shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {}

  static absl::StatusOr<BasicTensor> Create(Shape shape, std::vector<T> data) {
    for (std::size_t d : shape) {
      if (d == 0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "shape ", ShapeToString(shape), " has a zero-sized dimension"));
      }
    }
    if (NumElements(shape) != data.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("shape ", ShapeToString(shape), " needs ",
                       NumElements(shape), " values, got ", data.size()));
    }
    return BasicTensor(std::move(shape), std::move(data));
  }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_[axis]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  // Number of elements per leading-axis slice.
  std::size_t row_size() const {
    return shape_.empty() ? 0 : data_.size() / shape_[0];
  }
  std::span<T> row(std::size_t i) {
    return std::span<T>(data_).subspan(i * row_size(), row_size());
  }
  std::span<const T> row(std::size_t i) const {
    return std::span<const T>(data_).subspan(i * row_size(), row_size());
  }

  absl::StatusOr<BasicTensor> Reshaped(Shape shape) const {
    if (NumElements(shape) != data_.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("cannot reshape ", ShapeToString(shape_), " to ",
                       ShapeToString(shape)));
    }
    return BasicTensor(std::move(shape), data_);
  }

  template <typename U>
  BasicTensor<U> Cast() const {
    return BasicTensor<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
  }

  bool AllFinite() const {
    for (T v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  // Exact equality of shape and values.
  friend bool operator==(const BasicTensor& a, const BasicTensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<T> data_;
};

using Tensor = BasicTensor<float>;
using TensorD = BasicTensor<double>;

// Stacks the given rows of a batch tensor into a new batch.
Tensor GatherRows(const Tensor& batch, std::span<const std::size_t> rows);

// Shape of one sample of a batch tensor (drops the leading axis).
inline Shape SampleShape(const Tensor& batch) {
  return Shape(batch.shape().begin() + 1, batch.shape().end());
}

}  // namespace splitpriv

#endif  // SPLITPRIV_TENSOR_H_
