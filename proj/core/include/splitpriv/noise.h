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

#ifndef SPLITPRIV_NOISE_H_
#define SPLITPRIV_NOISE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace splitpriv {

// Isotropic Gaussian noise N(0, sigma^2 I). Every draw is addressed by an
// index: draw d of a model always uses the generator seeded from
// (seed, d), so results do not depend on call order, and models that differ
// only in sigma add proportional noise for the same draw index.
class NoiseModel {
 public:
  NoiseModel() = default;

  // sigma must be finite and >= 0.
  static absl::StatusOr<NoiseModel> Create(float sigma, std::uint64_t seed);

  float sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }

  // z = y + eps. sigma == 0 returns y unchanged.
  std::vector<float> Apply(std::span<const float> y,
                           std::uint64_t draw_index) const;
  void ApplyInPlace(std::span<float> y, std::uint64_t draw_index) const;

 private:
  NoiseModel(float sigma, std::uint64_t seed) : sigma_(sigma), seed_(seed) {}

  float sigma_ = 0.0f;
  std::uint64_t seed_ = 0;
};

}  // namespace splitpriv

#endif  // SPLITPRIV_NOISE_H_
