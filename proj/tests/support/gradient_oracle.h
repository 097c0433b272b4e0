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

#ifndef SPLITPRIV_TESTS_SUPPORT_GRADIENT_ORACLE_H_
#define SPLITPRIV_TESTS_SUPPORT_GRADIENT_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include "splitpriv/layer.h"
#include "splitpriv/network.h"
#include "splitpriv/tensor.h"

namespace splitpriv::test_support {

inline constexpr double kFiniteDifferenceStep = 1e-3;
inline constexpr double kGradRelTolerance = 1e-3;
inline constexpr double kGradAbsFloor = 1e-5;
// Step for whole-network checks.
inline constexpr double kNetworkStep = 1e-6;

// |a - n| divided by the allowed error max(rel * max(|a|, |n|), floor).
// Values <= 1 pass.
double ToleranceRatio(double analytic, double numeric);

struct GradCheckReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t failures = 0;
  double worst_ratio = 0.0;
  std::string worst_coordinate;

  void Record(double analytic, double numeric, const std::string& where);
  void Merge(const GradCheckReport& other);
  bool ok() const { return checked > 0 && failures == 0; }
};

// Central differences of L = sum(r * layer(x)) in double precision against
// the layer's float Backward, over every input and weight coordinate.
// Inputs avoid the ReLU and max-pool kinks by construction.
GradCheckReport CheckLayerGradients(Layer layer, const Shape& sample_shape,
                                    std::size_t batch, std::uint64_t seed);

// Same for a whole network through Backward(). Coordinates whose step
// straddles a kink (central differences at h and h/4 disagree by >0.01%) are
// skipped. At most max_coords weight coordinates per tensor are sampled.
GradCheckReport CheckNetworkGradients(const Network& net, std::size_t batch,
                                      std::uint64_t seed,
                                      std::size_t max_coords);

// Contrastive loss gradients against a double-precision oracle of
// ||f1 - f2||^2 and max(0, m - ||f1 - f2||)^2, both pair types, with the
// margin kept at least 1e-2 away from the distance.
GradCheckReport CheckContrastiveGradients(std::size_t dim, std::uint64_t seed);

// The six layer kinds on small shapes; one report per seed across all kinds.
GradCheckReport CheckAllLayerKinds(std::uint64_t seed);

}  // namespace splitpriv::test_support

#endif  // SPLITPRIV_TESTS_SUPPORT_GRADIENT_ORACLE_H_
