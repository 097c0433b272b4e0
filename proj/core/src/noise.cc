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

#include "absl/status/status.h"
#include "splitpriv/rng.h"

namespace splitpriv {

absl::StatusOr<NoiseModel> NoiseModel::Create(float sigma, std::uint64_t seed) {
  if (!std::isfinite(sigma) || sigma < 0.0f) {
    return absl::InvalidArgumentError("noise sigma must be finite and >= 0");
  }
  return NoiseModel(sigma, seed);
}

std::vector<float> NoiseModel::Apply(std::span<const float> y,
                                     std::uint64_t draw_index) const {
  std::vector<float> z(y.begin(), y.end());
  ApplyInPlace(z, draw_index);
  return z;
}

void NoiseModel::ApplyInPlace(std::span<float> y,
                              std::uint64_t draw_index) const {
  if (sigma_ == 0.0f) return;
  Rng rng(DeriveSeed(seed_, draw_index));
  const double sigma = sigma_;
  for (float& v : y) v = static_cast<float>(v + sigma * rng.Normal());
}

}  // namespace splitpriv
