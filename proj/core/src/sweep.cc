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

#include "splitpriv/sweep.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "splitpriv/classifier.h"
#include "splitpriv/privacy_metric.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {
namespace {

// Noise draw ranges; fixed so every sigma sees the same standard normals.
constexpr std::uint64_t kAttackTrainDraws = std::uint64_t{1} << 32;
constexpr std::uint64_t kAttackTestDraws = std::uint64_t{2} << 32;

Tensor Concat(const std::vector<Tensor>& parts) {
  std::vector<float> out;
  std::size_t rows = 0;
  for (const Tensor& p : parts) {
    out.insert(out.end(), p.data().begin(), p.data().end());
    rows += p.dim(0);
  }
  return Tensor(Shape{rows, parts.front().dim(1)}, std::move(out));
}

}  // namespace

std::vector<double> LogGrid(double lo, double hi, std::size_t n) {
  std::vector<double> grid;
  if (n == 0) return grid;
  if (n == 1) return {lo};
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(i) /
                                          static_cast<double>(n - 1)));
  }
  grid.back() = hi;
  return grid;
}

absl::Status SweepConfig::Validate() const {
  if (kinds.empty()) return absl::InvalidArgumentError("sweep needs >= 1 kind");
  if (sigmas.empty()) return absl::InvalidArgumentError("sigma grid is empty");
  for (EmbeddingKind k : kinds) {
    if (!IsNoisy(k)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sweep kinds must be noisy, got ", EmbeddingKindName(k)));
    }
  }
  for (double s : sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      return absl::InvalidArgumentError("sweep sigmas must be finite and > 0");
    }
  }
  if (replicas == 0) return absl::InvalidArgumentError("replicas must be >= 1");
  if (pca_dim == 0) return absl::InvalidArgumentError("pca_dim must be >= 1");
  return absl::OkStatus();
}

absl::StatusOr<std::vector<SweepRow>> RunSweep(const Network& plain_net,
                                               const Network* siamese_net,
                                               const SplitDataset& data,
                                               const SweepConfig& cfg) {
  SPLITPRIV_RETURN_IF_ERROR(cfg.Validate());
  const Dataset& train = data.train;
  const Dataset& test = data.test;
  TransferAttackConfig attack = cfg.attack;
  attack.freeze_index = cfg.split_index;

  std::vector<std::uint16_t> point_labels, point_primary;
  for (std::size_t r = 0; r < cfg.replicas; ++r) {
    point_labels.insert(point_labels.end(), test.sensitive.begin(),
                        test.sensitive.end());
    point_primary.insert(point_primary.end(), test.primary.begin(),
                         test.primary.end());
  }

  std::vector<SweepRow> rows;
  for (EmbeddingKind kind : cfg.kinds) {
    const Network* net = IsSiamese(kind) ? siamese_net : &plain_net;
    if (net == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat(
          "kind ", EmbeddingKindName(kind), " needs a Siamese model"));
    }
    SPLITPRIV_ASSIGN_OR_RETURN(
        std::shared_ptr<const PcaModel> pca,
        FitBoundaryPca(*net, cfg.split_index, cfg.pca_dim, train.images));
    std::vector<double> sigmas = cfg.sigmas;
    std::sort(sigmas.begin(), sigmas.end());

    Tensor clean_train, clean_test;
    for (std::size_t s = 0; s < sigmas.size(); ++s) {
      EmbeddingConfig ecfg;
      ecfg.kind = kind;
      ecfg.split_index = cfg.split_index;
      ecfg.pca_dim = cfg.pca_dim;
      ecfg.sigma = static_cast<float>(sigmas[s]);
      ecfg.noise_seed = cfg.noise_seed;
      SPLITPRIV_ASSIGN_OR_RETURN(Embedding emb,
                                 BuildEmbedding(*net, ecfg, nullptr, pca));
      if (s == 0) {
        SPLITPRIV_ASSIGN_OR_RETURN(clean_train,
                                   emb.extractor.ExtractClean(train.images));
        SPLITPRIV_ASSIGN_OR_RETURN(clean_test,
                                   emb.extractor.ExtractClean(test.images));
      }
      std::vector<Tensor> noisy;
      for (std::size_t r = 0; r < cfg.replicas; ++r) {
        noisy.push_back(emb.extractor.AddNoise(clean_test, r * test.size()));
      }
      Tensor points = Concat(noisy);
      SPLITPRIV_ASSIGN_OR_RETURN(Tensor probs, emb.analyzer.Analyze(points));

      PrivacyMetricInput metric{
          clean_train,  train.sensitive,    points,
          point_labels, ecfg.sigma.value(), train.sensitive_classes};
      SPLITPRIV_ASSIGN_OR_RETURN(PrivacyResult privacy, PrivacyTotal(metric));

      SweepRow row;
      row.sigma = sigmas[s];
      row.split_index = cfg.split_index;
      row.pca_dim = cfg.pca_dim;
      row.kind = kind;
      row.primary_acc = Accuracy(probs, point_primary);
      row.privacy_total = privacy.total;
      if (cfg.run_transfer) {
        SPLITPRIV_ASSIGN_OR_RETURN(
            AttackResult res,
            TrainAttackHead(
                emb.extractor.AddNoise(clean_train, kAttackTrainDraws),
                train.sensitive,
                emb.extractor.AddNoise(clean_test, kAttackTestDraws),
                test.sensitive, train.sensitive_classes, attack));
        row.transfer_acc = res.test_accuracy;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void WriteSweepCsv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "sigma,split_index,pca_dim,kind,primary_acc,transfer_acc,"
         "privacy_total\n";
  for (const SweepRow& r : rows) {
    out << absl::StrFormat("%.6g,%d,%d,%s,%.6g,%.6g,%.6g\n", r.sigma,
                           r.split_index, r.pca_dim, EmbeddingKindName(r.kind),
                           r.primary_acc, r.transfer_acc, r.privacy_total);
  }
}

std::vector<CurvePoint> ExtractCurve(std::span<const SweepRow> rows,
                                     EmbeddingKind kind,
                                     std::size_t split_index) {
  std::vector<const SweepRow*> picked;
  for (const SweepRow& r : rows) {
    if (r.kind == kind && r.split_index == split_index) picked.push_back(&r);
  }
  std::stable_sort(
      picked.begin(), picked.end(),
      [](const SweepRow* a, const SweepRow* b) { return a->sigma < b->sigma; });
  std::vector<CurvePoint> curve;
  for (const SweepRow* r : picked) {
    curve.push_back({r->primary_acc, r->privacy_total});
  }
  return curve;
}

std::optional<double> PrivacyAtAccuracy(std::span<const CurvePoint> curve,
                                        double accuracy) {
  std::optional<double> best;
  auto consider = [&best](double p) {
    if (!best.has_value() || p > *best) best = p;
  };
  for (const CurvePoint& p : curve) {
    if (p.accuracy == accuracy) consider(p.privacy);
  }
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const CurvePoint& u = curve[i];
    const CurvePoint& v = curve[i + 1];
    const double lo = std::min(u.accuracy, v.accuracy);
    const double hi = std::max(u.accuracy, v.accuracy);
    if (accuracy < lo || accuracy > hi || lo == hi) continue;
    const double t = (accuracy - u.accuracy) / (v.accuracy - u.accuracy);
    consider(u.privacy + t * (v.privacy - u.privacy));
  }
  return best;
}

DominanceReport CompareCurves(std::span<const CurvePoint> a,
                              std::span<const CurvePoint> b, double slack,
                              std::size_t min_comparisons) {
  DominanceReport report;
  if (a.empty() || b.empty()) return report;
  auto range = [](std::span<const CurvePoint> c) {
    double lo = c.front().accuracy, hi = lo;
    for (const CurvePoint& p : c) {
      lo = std::min(lo, p.accuracy);
      hi = std::max(hi, p.accuracy);
    }
    return std::pair{lo, hi};
  };
  const auto [alo, ahi] = range(a);
  const auto [blo, bhi] = range(b);
  const double lo = std::max(alo, blo), hi = std::min(ahi, bhi);

  std::vector<double> levels;
  for (auto c : {a, b}) {
    for (const CurvePoint& p : c) {
      if (p.accuracy >= lo && p.accuracy <= hi) levels.push_back(p.accuracy);
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  report.worst_margin = std::numeric_limits<double>::infinity();
  for (double acc : levels) {
    const auto pa = PrivacyAtAccuracy(a, acc);
    const auto pb = PrivacyAtAccuracy(b, acc);
    if (!pa.has_value() || !pb.has_value()) continue;
    ++report.comparisons;
    report.worst_margin = std::min(report.worst_margin, *pa - *pb);
  }
  if (report.comparisons == 0) report.worst_margin = 0.0;
  report.dominates =
      report.comparisons >= min_comparisons && report.worst_margin >= -slack;
  return report;
}

MonotonicityReport CheckNonDecreasing(std::span<const double> values) {
  MonotonicityReport report;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double drop = values[i] - values[i + 1];
    if (drop > 0.0) {
      ++report.inversions;
      report.worst_drop = std::max(report.worst_drop, drop);
    }
  }
  return report;
}

}  // namespace splitpriv
