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

#include "splitpriv/siamese.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "splitpriv/classifier.h"
#include "splitpriv/rng.h"
#include "splitpriv/status_macros.h"

namespace splitpriv {

absl::StatusOr<ContrastiveResult> ContrastiveLoss(std::span<const float> f1,
                                                  std::span<const float> f2,
                                                  bool similar, double margin) {
  if (f1.size() != f2.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("contrastive pair has mismatched lengths ", f1.size(),
                     " and ", f2.size()));
  }
  if (!(margin > 0.0)) {
    return absl::InvalidArgumentError("margin must be > 0");
  }
  const std::size_t n = f1.size();
  ContrastiveResult r;
  r.grad_f1.assign(n, 0.0f);
  r.grad_f2.assign(n, 0.0f);
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(f1[i]) - f2[i];
    sq += d * d;
  }
  if (similar) {
    r.loss = sq;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = 2.0 * (static_cast<double>(f1[i]) - f2[i]);
      r.grad_f1[i] = static_cast<float>(g);
      r.grad_f2[i] = static_cast<float>(-g);
    }
    return r;
  }
  const double dist = std::sqrt(sq);
  if (dist >= margin) return r;
  const double gap = margin - dist;
  r.loss = gap * gap;
  if (dist == 0.0) return r;
  // d/df1 (m - d)^2 = -2 (m - d) (f1 - f2) / d
  const double scale = -2.0 * gap / dist;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = scale * (static_cast<double>(f1[i]) - f2[i]);
    r.grad_f1[i] = static_cast<float>(g);
    r.grad_f2[i] = static_cast<float>(-g);
  }
  return r;
}

absl::Status SiameseConfig::Validate(const Network& net) const {
  if (split_index < 1 || split_index >= net.num_layers()) {
    return absl::OutOfRangeError(absl::StrCat("split_index ", split_index,
                                              " outside [1, ",
                                              net.num_layers() - 1, "]"));
  }
  if (!(margin > 0.0f)) return absl::InvalidArgumentError("margin must be > 0");
  if (!(lambda >= 0.0f) || !std::isfinite(lambda)) {
    return absl::InvalidArgumentError("lambda must be finite and >= 0");
  }
  if (pairs_per_epoch == 0) {
    return absl::InvalidArgumentError("pairs_per_epoch must be >= 1");
  }
  return sgd.Validate();
}

absl::StatusOr<std::vector<SiameseEpochLog>> SiameseFinetune(
    Network* net, const Dataset& train, const SiameseConfig& cfg) {
  SPLITPRIV_RETURN_IF_ERROR(cfg.Validate(*net));
  if (net->layers().back().kind() != LayerKind::kSoftmax) {
    return absl::FailedPreconditionError(
        "Siamese fine-tuning requires a classifier ending in Softmax");
  }
  if (net->num_classes() < train.primary_classes) {
    return absl::FailedPreconditionError(
        "network has fewer outputs than primary classes");
  }
  const std::size_t split = cfg.split_index;
  const std::size_t softmax = net->num_layers() - 1;
  const double feature_dim =
      static_cast<double>(NumElements(net->ShapeAt(split)));
  const double scale = 1.0 / std::sqrt(feature_dim);

  std::vector<SiameseEpochLog> log;
  for (std::size_t epoch = 0; epoch < cfg.sgd.epochs; ++epoch) {
    SPLITPRIV_ASSIGN_OR_RETURN(std::vector<SamplePair> pairs,
                               SamplePairs(train, cfg.pairs_per_epoch,
                                           DeriveSeed(cfg.sgd.seed, epoch)));
    SiameseEpochLog entry{epoch, 0.0, 0.0, 0.0};
    std::size_t correct = 0;

    for (std::size_t start = 0; start < pairs.size();
         start += cfg.sgd.batch_size) {
      const std::size_t stop =
          std::min(pairs.size(), start + cfg.sgd.batch_size);
      const std::size_t batch = stop - start;
      std::vector<std::size_t> ia, ib;
      std::vector<std::uint16_t> ya, yb;
      for (std::size_t p = start; p < stop; ++p) {
        ia.push_back(pairs[p].a);
        ib.push_back(pairs[p].b);
        ya.push_back(train.primary[pairs[p].a]);
        yb.push_back(train.primary[pairs[p].b]);
      }
      SPLITPRIV_ASSIGN_OR_RETURN(Activations acts_a,
                                 Forward(*net, GatherRows(train.images, ia)));
      SPLITPRIV_ASSIGN_OR_RETURN(Activations acts_b,
                                 Forward(*net, GatherRows(train.images, ib)));
      SPLITPRIV_ASSIGN_OR_RETURN(CrossEntropy ce_a,
                                 SoftmaxCrossEntropy(acts_a.back(), ya));
      SPLITPRIV_ASSIGN_OR_RETURN(CrossEntropy ce_b,
                                 SoftmaxCrossEntropy(acts_b.back(), yb));
      entry.cls_loss += (ce_a.mean_loss + ce_b.mean_loss) * batch;
      correct += ce_a.correct + ce_b.correct;

      // Contrastive gradients injected at the split boundary.
      Tensor inject_a(acts_a[split].shape());
      Tensor inject_b(acts_b[split].shape());
      const double weight = cfg.lambda / static_cast<double>(batch);
      std::vector<float> fa, fb;
      for (std::size_t j = 0; j < batch; ++j) {
        auto ra = acts_a[split].row(j);
        auto rb = acts_b[split].row(j);
        fa.resize(ra.size());
        fb.resize(rb.size());
        for (std::size_t k = 0; k < ra.size(); ++k) {
          fa[k] = static_cast<float>(ra[k] * scale);
          fb[k] = static_cast<float>(rb[k] * scale);
        }
        SPLITPRIV_ASSIGN_OR_RETURN(
            ContrastiveResult c,
            ContrastiveLoss(fa, fb, pairs[start + j].similar, cfg.margin));
        entry.contrastive_loss += c.loss;
        auto ga = inject_a.row(j);
        auto gb = inject_b.row(j);
        for (std::size_t k = 0; k < ga.size(); ++k) {
          ga[k] = static_cast<float>(c.grad_f1[k] * scale * weight);
          gb[k] = static_cast<float>(c.grad_f2[k] * scale * weight);
        }
      }

      Gradients grads = ZeroGradients(*net);
      for (auto [acts, ce, inject] : {std::tuple{&acts_a, &ce_a, &inject_a},
                                      std::tuple{&acts_b, &ce_b, &inject_b}}) {
        SPLITPRIV_ASSIGN_OR_RETURN(
            Tensor at_split,
            BackwardRange(*net, *acts, std::move(ce->grad_logits), softmax,
                          split, &grads));
        for (std::size_t k = 0; k < at_split.size(); ++k) {
          at_split[k] += (*inject)[k];
        }
        SPLITPRIV_RETURN_IF_ERROR(
            BackwardRange(*net, *acts, std::move(at_split), split, 0, &grads)
                .status());
      }
      SPLITPRIV_RETURN_IF_ERROR(SgdStep(net, grads, cfg.sgd));
    }
    const double n = static_cast<double>(pairs.size());
    entry.cls_loss /= n;
    entry.contrastive_loss /= n;
    entry.primary_acc = static_cast<double>(correct) / (2.0 * n);
    log.push_back(entry);
  }
  net->set_siamese_split(split);
  return log;
}

void WriteSiameseLogCsv(std::span<const SiameseEpochLog> log,
                        std::ostream& out) {
  out << "epoch,cls_loss,contrastive_loss,primary_acc\n";
  for (const auto& e : log) {
    out << absl::StrFormat("%d,%.6g,%.6g,%.6g\n", e.epoch, e.cls_loss,
                           e.contrastive_loss, e.primary_acc);
  }
}

absl::StatusOr<ClassDistances> PrimaryClassDistances(const Network& net,
                                                     const Dataset& data,
                                                     std::size_t split_index) {
  SPLITPRIV_ASSIGN_OR_RETURN(Tensor f,
                             BoundaryFeatures(net, data.images, split_index));
  double intra = 0.0, inter = 0.0;
  std::size_t n_intra = 0, n_inter = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto fi = f.row(i);
    for (std::size_t j = i + 1; j < data.size(); ++j) {
      auto fj = f.row(j);
      double sq = 0.0;
      for (std::size_t k = 0; k < fi.size(); ++k) {
        const double d = static_cast<double>(fi[k]) - fj[k];
        sq += d * d;
      }
      if (data.primary[i] == data.primary[j]) {
        intra += std::sqrt(sq);
        ++n_intra;
      } else {
        inter += std::sqrt(sq);
        ++n_inter;
      }
    }
  }
  if (n_intra == 0 || n_inter == 0) {
    return absl::FailedPreconditionError(
        "need samples from at least two primary classes, two per class");
  }
  return ClassDistances{intra / n_intra, inter / n_inter};
}

}  // namespace splitpriv
