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

#ifndef SPLITPRIV_SWEEP_H_
#define SPLITPRIV_SWEEP_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "splitpriv/datagen.h"
#include "splitpriv/embedding.h"
#include "splitpriv/network.h"
#include "splitpriv/transfer_attack.h"

namespace splitpriv {

// n log-spaced values from lo to hi inclusive.
std::vector<double> LogGrid(double lo, double hi, std::size_t n);

struct SweepConfig {
  std::vector<EmbeddingKind> kinds{EmbeddingKind::kAdvanced,
                                   EmbeddingKind::kNoisyReducedSimple};
  std::size_t split_index = 9;
  std::uint32_t pca_dim = 8;
  std::vector<double> sigmas = LogGrid(0.01, 10.0, 12);
  // Noisy copies of every test sample used as metric points.
  std::size_t replicas = 4;
  std::uint64_t noise_seed = 7;
  bool run_transfer = true;
  TransferAttackConfig attack;  // freeze_index is taken from split_index

  absl::Status Validate() const;
};

struct SweepRow {
  double sigma = 0.0;
  std::size_t split_index = 0;
  std::uint32_t pca_dim = 0;
  EmbeddingKind kind = EmbeddingKind::kAdvanced;
  double primary_acc = 0.0;
  double transfer_acc = 0.0;  // 0 when transfer attacks are disabled
  double privacy_total = 0.0;
};

// Rows grouped by kind (in config order), ascending sigma within a kind.
// Siamese kinds run on siamese_net, which may be null when none are asked
// for. PCA is fitted once per kind on the training split; the adversary's
// reference set is the clean reduced training features, and the metric
// points are noisy reduced test features.
absl::StatusOr<std::vector<SweepRow>> RunSweep(const Network& plain_net,
                                               const Network* siamese_net,
                                               const SplitDataset& data,
                                               const SweepConfig& cfg);

// Header plus one row per entry, floats with 6 significant digits.
void WriteSweepCsv(std::span<const SweepRow> rows, std::ostream& out);

struct CurvePoint {
  double accuracy = 0.0;
  double privacy = 0.0;
};

// Points of one (kind, split) curve in ascending sigma order.
std::vector<CurvePoint> ExtractCurve(std::span<const SweepRow> rows,
                                     EmbeddingKind kind,
                                     std::size_t split_index);

// Best privacy the curve reaches at the given accuracy, linearly
// interpolating between consecutive points; nullopt outside its range.
std::optional<double> PrivacyAtAccuracy(std::span<const CurvePoint> curve,
                                        double accuracy);

struct DominanceReport {
  std::size_t comparisons = 0;
  // min over compared accuracy levels of privacy(a) - privacy(b)
  double worst_margin = 0.0;
  bool dominates = false;
};

// a weakly dominates b when at every accuracy level of either curve that
// lies in the shared accuracy range, privacy(a) >= privacy(b) - slack.
// Needs at least min_comparisons levels.
DominanceReport CompareCurves(std::span<const CurvePoint> a,
                              std::span<const CurvePoint> b, double slack,
                              std::size_t min_comparisons = 2);

struct MonotonicityReport {
  std::size_t inversions = 0;
  double worst_drop = 0.0;
};

// Counts consecutive decreases of a sequence.
MonotonicityReport CheckNonDecreasing(std::span<const double> values);

}  // namespace splitpriv

#endif  // SPLITPRIV_SWEEP_H_
