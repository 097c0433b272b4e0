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
#include "splitpriv/tensor.h"

#include <algorithm>

namespace splitpriv {

Tensor GatherRows(const Tensor& batch, std::span<const std::size_t> rows) {
  Shape shape = batch.shape();
  shape[0] = rows.size();
  const std::size_t stride = batch.row_size();
  std::vector<float> data(rows.size() * stride);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = batch.row(rows[i]);
    std::copy(src.begin(), src.end(), data.begin() + i * stride);
  }
  return Tensor(std::move(shape), std::move(data));
}

}  // namespace splitpriv
