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

#include "cli.h"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/escaping.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "run_config.h"
#include "splitpriv/byte_io.h"
#include "splitpriv/classifier.h"
#include "splitpriv/datagen.h"
#include "splitpriv/embedding.h"
#include "splitpriv/model_io.h"
#include "splitpriv/privacy_metric.h"
#include "splitpriv/rng.h"
#include "splitpriv/server.h"
#include "splitpriv/siamese.h"
#include "splitpriv/split_cost.h"
#include "splitpriv/status_macros.h"
#include "splitpriv/sweep.h"
#include "splitpriv/transfer_attack.h"
#include "splitpriv/wire.h"

namespace splitpriv {
namespace {

using Handler = std::function<absl::Status(const RunConfig&, std::ostream&)>;

struct Command {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
  Handler run;
};

OptionSpec Opt(std::string name, std::string def, std::string help,
               bool required = false) {
  return OptionSpec{std::move(name), std::move(def), std::move(help), required,
                    false};
}

OptionSpec Flag(std::string name, std::string help) {
  return OptionSpec{std::move(name), "false", std::move(help), false, true};
}

OptionSpec SeedOpt() { return Opt("seed", "7", "seed for all randomness"); }

absl::Status WriteCsv(const std::filesystem::path& path,
                      const std::string& text) {
  return WriteTextFile(path, text);
}

std::filesystem::path WithSuffix(const std::filesystem::path& p,
                                 const char* suffix) {
  std::filesystem::path out = p;
  out += suffix;
  return out;
}

absl::StatusOr<SgdConfig> SgdFrom(const RunConfig& cfg, const char* lr,
                                  const char* epochs) {
  SgdConfig sgd;
  SPLITPRIV_ASSIGN_OR_RETURN(sgd.learning_rate, cfg.Float(lr));
  SPLITPRIV_ASSIGN_OR_RETURN(sgd.batch_size, cfg.Size("batch"));
  SPLITPRIV_ASSIGN_OR_RETURN(sgd.epochs, cfg.Size(epochs));
  SPLITPRIV_ASSIGN_OR_RETURN(sgd.seed, cfg.U64("seed"));
  SPLITPRIV_RETURN_IF_ERROR(sgd.Validate());
  return sgd;
}

absl::StatusOr<ModelFile> LoadPlainModelFile(const std::string& path) {
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile file, LoadModelFile(path));
  if (file.kind.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat(
        path, " is an embedding model; pass the trained network instead"));
  }
  return file;
}

// Resolves the embedding an invocation refers to from the model file and
// the flags. The file's own embedding section, when present, wins.
absl::StatusOr<Embedding> EmbeddingFor(const ModelFile& file,
                                       const RunConfig& cfg,
                                       const Dataset& train) {
  EmbeddingConfig ecfg;
  if (cfg.Has("kind")) {
    SPLITPRIV_ASSIGN_OR_RETURN(ecfg.kind, ParseEmbeddingKind(cfg.Str("kind")));
  } else if (file.kind.has_value()) {
    ecfg.kind = *file.kind;
  } else {
    ecfg.kind = EmbeddingKind::kSimple;
  }
  SPLITPRIV_ASSIGN_OR_RETURN(ecfg.split_index, cfg.Size("split"));
  if (file.split_index.has_value() && *file.split_index != ecfg.split_index) {
    return absl::InvalidArgumentError(
        absl::StrCat("model file holds an embedding at split ",
                     *file.split_index, ", not ", ecfg.split_index));
  }
  std::shared_ptr<const PcaModel> fitted;
  if (IsReduced(ecfg.kind)) {
    if (file.pca != nullptr) {
      fitted = file.pca;
      ecfg.pca_dim = static_cast<std::uint32_t>(file.pca->k());
    } else {
      SPLITPRIV_ASSIGN_OR_RETURN(std::uint64_t k, cfg.U64("pca-dim"));
      ecfg.pca_dim = static_cast<std::uint32_t>(k);
    }
  }
  if (IsNoisy(ecfg.kind)) {
    SPLITPRIV_ASSIGN_OR_RETURN(float sigma, cfg.Float("sigma"));
    ecfg.sigma = sigma;
  }
  SPLITPRIV_ASSIGN_OR_RETURN(ecfg.noise_seed, cfg.U64("seed"));
  return BuildEmbedding(file.net, ecfg, &train.images, std::move(fitted));
}

// gen-data ------------------------------------------------------------------

absl::Status GenData(const RunConfig& cfg, std::ostream& out) {
  DatasetSpec spec;
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint64_t p, cfg.U64("primary-classes"));
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint64_t t, cfg.U64("sensitive-classes"));
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint64_t n, cfg.U64("samples-per-identity"));
  spec.primary_classes = static_cast<std::uint32_t>(p);
  spec.sensitive_classes = static_cast<std::uint32_t>(t);
  spec.samples_per_identity = static_cast<std::uint32_t>(n);
  SPLITPRIV_ASSIGN_OR_RETURN(spec.noise_std, cfg.Float("noise-std"));
  SPLITPRIV_ASSIGN_OR_RETURN(spec.seed, cfg.U64("seed"));
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, Generate(spec));
  const std::string path = cfg.Str("out");
  SPLITPRIV_RETURN_IF_ERROR(SaveDataset(data, path));
  SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(path));
  out << absl::StrFormat("wrote %d train and %d test samples to %s\n",
                         data.train.size(), data.test.size(), path);
  return absl::OkStatus();
}

// train ---------------------------------------------------------------------

absl::Status Train(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, LoadDataset(cfg.Str("data")));
  SPLITPRIV_ASSIGN_OR_RETURN(SgdConfig sgd, SgdFrom(cfg, "lr", "epochs"));
  SPLITPRIV_ASSIGN_OR_RETURN(
      Network net,
      MakeDeskScaleClassifier(data.train.primary_classes, sgd.seed));
  SPLITPRIV_ASSIGN_OR_RETURN(
      std::vector<EpochStats> log,
      TrainClassifier(&net, data.train.images, data.train.primary, sgd));
  SPLITPRIV_ASSIGN_OR_RETURN(Tensor probs, Predict(net, data.test.images));
  const double acc = Accuracy(probs, data.test.primary);

  const std::string path = cfg.Str("out");
  SPLITPRIV_RETURN_IF_ERROR(SaveModel(net, path));
  std::string csv = "epoch,loss,accuracy\n";
  for (const EpochStats& e : log) {
    absl::StrAppend(
        &csv, absl::StrFormat("%d,%.6g,%.6g\n", e.epoch, e.loss, e.accuracy));
  }
  SPLITPRIV_RETURN_IF_ERROR(WriteCsv(WithSuffix(path, ".log.csv"), csv));
  SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(path));
  out << absl::StrFormat("primary test accuracy %.6g\n", acc);
  return absl::OkStatus();
}

// finetune-siamese ----------------------------------------------------------

absl::Status FinetuneSiamese(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, LoadDataset(cfg.Str("data")));
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile file,
                             LoadPlainModelFile(cfg.Str("model")));
  SiameseConfig sc;
  SPLITPRIV_ASSIGN_OR_RETURN(sc.split_index, cfg.Size("split"));
  SPLITPRIV_ASSIGN_OR_RETURN(sc.margin, cfg.Float("margin"));
  SPLITPRIV_ASSIGN_OR_RETURN(sc.lambda, cfg.Float("lambda"));
  SPLITPRIV_ASSIGN_OR_RETURN(sc.pairs_per_epoch, cfg.Size("pairs-per-epoch"));
  SPLITPRIV_ASSIGN_OR_RETURN(sc.sgd, SgdFrom(cfg, "lr", "epochs"));
  SPLITPRIV_RETURN_IF_ERROR(sc.Validate(file.net));

  Network net = file.net;
  SPLITPRIV_ASSIGN_OR_RETURN(
      ClassDistances before,
      PrimaryClassDistances(net, data.test, sc.split_index));
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<SiameseEpochLog> log,
                             SiameseFinetune(&net, data.train, sc));
  SPLITPRIV_ASSIGN_OR_RETURN(
      ClassDistances after,
      PrimaryClassDistances(net, data.test, sc.split_index));
  SPLITPRIV_ASSIGN_OR_RETURN(Tensor probs, Predict(net, data.test.images));

  const std::string path = cfg.Str("out");
  SPLITPRIV_RETURN_IF_ERROR(SaveModel(net, path));
  std::ostringstream csv;
  WriteSiameseLogCsv(log, csv);
  SPLITPRIV_RETURN_IF_ERROR(WriteCsv(WithSuffix(path, ".log.csv"), csv.str()));
  SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(path));
  out << absl::StrFormat(
      "primary test accuracy %.6g; intra distance %.6g -> %.6g; inter "
      "distance %.6g -> %.6g\n",
      Accuracy(probs, data.test.primary), before.intra, after.intra,
      before.inter, after.inter);
  return absl::OkStatus();
}

// fit-pca -------------------------------------------------------------------

absl::Status FitPcaCommand(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, LoadDataset(cfg.Str("data")));
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile file,
                             LoadPlainModelFile(cfg.Str("model")));
  SPLITPRIV_ASSIGN_OR_RETURN(std::size_t split, cfg.Size("split"));
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint64_t k, cfg.U64("pca-dim"));
  SPLITPRIV_ASSIGN_OR_RETURN(
      file.pca, FitBoundaryPca(file.net, split, static_cast<std::uint32_t>(k),
                               data.train.images));
  file.kind = file.net.siamese_split() == split ? EmbeddingKind::kReducedSiamese
                                                : EmbeddingKind::kReducedSimple;
  file.split_index = split;
  const std::string path = cfg.Str("out");
  SPLITPRIV_RETURN_IF_ERROR(SaveModelFile(file, path));
  SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(path));
  double kept = 0.0;
  for (double r : file.pca->ExplainedVarianceRatio()) kept += r;
  out << absl::StrFormat(
      "fitted %d of %d components at split %d (%s); explained variance %.6g\n",
      file.pca->k(), file.pca->dim(), split, EmbeddingKindName(*file.kind),
      kept);
  return absl::OkStatus();
}

// build-embedding -----------------------------------------------------------

absl::Status BuildEmbeddingCommand(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, LoadDataset(cfg.Str("data")));
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile file, LoadModelFile(cfg.Str("model")));
  SPLITPRIV_ASSIGN_OR_RETURN(Embedding emb,
                             EmbeddingFor(file, cfg, data.train));
  ModelFile result;
  result.net = file.net;
  result.kind = emb.config.kind;
  result.split_index = emb.config.split_index;
  result.pca = emb.extractor.pca();
  const std::string path = cfg.Str("out");
  SPLITPRIV_RETURN_IF_ERROR(SaveModelFile(result, path));
  SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(path));
  out << absl::StrFormat("%s embedding at split %d, %d features per sample\n",
                         EmbeddingKindName(emb.config.kind),
                         emb.config.split_index, emb.extractor.output_dim());
  return absl::OkStatus();
}

// eval-transfer -------------------------------------------------------------

absl::Status EvalTransfer(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, LoadDataset(cfg.Str("data")));
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile file, LoadModelFile(cfg.Str("model")));
  TransferAttackConfig attack;
  SPLITPRIV_ASSIGN_OR_RETURN(attack.freeze_index, cfg.Size("split"));
  SPLITPRIV_ASSIGN_OR_RETURN(attack.hidden, cfg.Size("hidden"));
  SPLITPRIV_ASSIGN_OR_RETURN(attack.sgd, SgdFrom(cfg, "lr", "epochs"));

  AttackResult result;
  std::string kind = "raw";
  if (cfg.Has("kind") || file.kind.has_value()) {
    SPLITPRIV_ASSIGN_OR_RETURN(Embedding emb,
                               EmbeddingFor(file, cfg, data.train));
    kind = EmbeddingKindName(emb.config.kind);
    SPLITPRIV_ASSIGN_OR_RETURN(
        result,
        TransferAttack(emb.extractor, attack, data.train, data.test, 0));
  } else {
    SPLITPRIV_ASSIGN_OR_RETURN(
        result, TransferAttack(file.net, attack, data.train, data.test));
  }
  const std::string csv = absl::StrFormat(
      "split_index,kind,train_acc,test_acc,chance\n%d,%s,%.6g,%.6g,%.6g\n",
      attack.freeze_index, kind, result.train_accuracy, result.test_accuracy,
      1.0 / data.train.sensitive_classes);
  out << csv;
  if (cfg.Has("out")) {
    SPLITPRIV_RETURN_IF_ERROR(WriteCsv(cfg.Str("out"), csv));
    SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(cfg.Str("out")));
  }
  return absl::OkStatus();
}

// eval-privacy --------------------------------------------------------------

absl::Status EvalPrivacy(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, LoadDataset(cfg.Str("data")));
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile file, LoadModelFile(cfg.Str("model")));
  SPLITPRIV_ASSIGN_OR_RETURN(Embedding emb,
                             EmbeddingFor(file, cfg, data.train));
  if (!IsNoisy(emb.config.kind)) {
    return absl::InvalidArgumentError(
        "eval-privacy needs a noisy kind (noisy-reduced-simple or advanced)");
  }
  SweepConfig sweep;
  sweep.kinds = {emb.config.kind};
  sweep.split_index = emb.config.split_index;
  sweep.pca_dim = *emb.config.pca_dim;
  sweep.sigmas = {*emb.config.sigma};
  SPLITPRIV_ASSIGN_OR_RETURN(sweep.replicas, cfg.Size("replicas"));
  sweep.noise_seed = emb.config.noise_seed;
  sweep.run_transfer = false;
  SPLITPRIV_ASSIGN_OR_RETURN(std::vector<SweepRow> rows,
                             RunSweep(file.net, &file.net, data, sweep));
  std::string csv =
      "sigma,split_index,pca_dim,kind,primary_acc,privacy_total\n";
  for (const SweepRow& r : rows) {
    absl::StrAppend(&csv, absl::StrFormat("%.6g,%d,%d,%s,%.6g,%.6g\n", r.sigma,
                                          r.split_index, r.pca_dim,
                                          EmbeddingKindName(r.kind),
                                          r.primary_acc, r.privacy_total));
  }
  out << csv;
  if (cfg.Has("out")) {
    SPLITPRIV_RETURN_IF_ERROR(WriteCsv(cfg.Str("out"), csv));
    SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(cfg.Str("out")));
  }
  return absl::OkStatus();
}

// sweep ---------------------------------------------------------------------

absl::Status Sweep(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, LoadDataset(cfg.Str("data")));
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile plain, LoadModelFile(cfg.Str("model")));
  std::optional<ModelFile> siamese;
  if (cfg.Has("siamese-model")) {
    SPLITPRIV_ASSIGN_OR_RETURN(siamese,
                               LoadModelFile(cfg.Str("siamese-model")));
  }
  SweepConfig sweep;
  sweep.kinds.clear();
  for (const std::string& k : cfg.List("kinds")) {
    SPLITPRIV_ASSIGN_OR_RETURN(EmbeddingKind kind, ParseEmbeddingKind(k));
    sweep.kinds.push_back(kind);
  }
  SPLITPRIV_ASSIGN_OR_RETURN(sweep.split_index, cfg.Size("split"));
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint64_t k, cfg.U64("pca-dim"));
  sweep.pca_dim = static_cast<std::uint32_t>(k);
  SPLITPRIV_ASSIGN_OR_RETURN(double lo, cfg.Double("sigma-min"));
  SPLITPRIV_ASSIGN_OR_RETURN(double hi, cfg.Double("sigma-max"));
  SPLITPRIV_ASSIGN_OR_RETURN(std::size_t n, cfg.Size("sigma-count"));
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
    return absl::InvalidArgumentError(
        "sigma grid needs 0 < sigma-min <= sigma-max and sigma-count >= 1");
  }
  sweep.sigmas = LogGrid(lo, hi, n);
  SPLITPRIV_ASSIGN_OR_RETURN(sweep.replicas, cfg.Size("replicas"));
  SPLITPRIV_ASSIGN_OR_RETURN(sweep.noise_seed, cfg.U64("seed"));
  SPLITPRIV_ASSIGN_OR_RETURN(sweep.run_transfer, cfg.Bool("transfer"));
  SPLITPRIV_ASSIGN_OR_RETURN(sweep.attack.sgd.epochs,
                             cfg.Size("attack-epochs"));
  sweep.attack.sgd.seed = DeriveSeed(sweep.noise_seed, 0x7472);
  SPLITPRIV_ASSIGN_OR_RETURN(
      std::vector<SweepRow> rows,
      RunSweep(plain.net, siamese.has_value() ? &siamese->net : nullptr, data,
               sweep));
  std::ostringstream csv;
  WriteSweepCsv(rows, csv);
  const std::string path = cfg.Str("out");
  SPLITPRIV_RETURN_IF_ERROR(WriteCsv(path, csv.str()));
  SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(path));
  out << absl::StrFormat("wrote %d sweep rows to %s\n", rows.size(), path);
  return absl::OkStatus();
}

// serve ---------------------------------------------------------------------

absl::Status Serve(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile file, LoadModelFile(cfg.Str("model")));
  SPLITPRIV_ASSIGN_OR_RETURN(Endpoint ep, ParseEndpoint(cfg.Str("endpoint")));
  SPLITPRIV_ASSIGN_OR_RETURN(std::unique_ptr<AnalyzerServer> server,
                             AnalyzerServer::Create(file));
  // Connection threads inherit the blocked mask; only sigwait sees signals.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  SPLITPRIV_RETURN_IF_ERROR(server->Start(ep));
  const ModelHash& h = server->model_hash();
  out << absl::StrFormat(
             "listening on %s:%d model_hash=%s", ep.host, server->port(),
             absl::BytesToHexString(absl::string_view(
                 reinterpret_cast<const char*>(h.data()), h.size())))
      << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  server->Stop();
  return absl::OkStatus();
}

// infer ---------------------------------------------------------------------

absl::Status Infer(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, LoadDataset(cfg.Str("data")));
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile file, LoadModelFile(cfg.Str("model")));
  SPLITPRIV_ASSIGN_OR_RETURN(Embedding emb,
                             EmbeddingFor(file, cfg, data.train));
  SPLITPRIV_ASSIGN_OR_RETURN(bool local, cfg.Bool("local"));
  SPLITPRIV_ASSIGN_OR_RETURN(std::size_t first, cfg.Size("index"));
  SPLITPRIV_ASSIGN_OR_RETURN(std::size_t count, cfg.Size("count"));
  const Dataset& test = data.test;
  if (count == 0 || first >= test.size() || count > test.size() - first) {
    return absl::OutOfRangeError(absl::StrCat("samples [", first, ", ",
                                              first + count, ") outside the ",
                                              test.size(), " test samples"));
  }
  std::optional<AnalyzerClient> client;
  if (!local) {
    if (!cfg.Has("endpoint")) {
      return absl::InvalidArgumentError("infer needs --endpoint or --local");
    }
    SPLITPRIV_ASSIGN_OR_RETURN(Endpoint ep, ParseEndpoint(cfg.Str("endpoint")));
    SPLITPRIV_ASSIGN_OR_RETURN(client, AnalyzerClient::Connect(ep));
  }
  std::string csv = "index,split_index,kind,label,predicted";
  for (std::size_t c = 0; c < emb.analyzer.num_classes(); ++c) {
    absl::StrAppend(&csv, ",p", c);
  }
  csv += "\n";
  for (std::size_t i = first; i < first + count; ++i) {
    const std::size_t row[] = {i};
    // Noise draw i belongs to test sample i, so local and remote runs agree.
    SPLITPRIV_ASSIGN_OR_RETURN(
        Tensor z, emb.extractor.ExtractAt(GatherRows(test.images, row), i));
    std::vector<float> probs;
    if (local) {
      SPLITPRIV_ASSIGN_OR_RETURN(Tensor p, emb.analyzer.Analyze(z));
      probs = std::move(p.storage());
    } else {
      FeatureMessage msg;
      msg.model_hash = file.hash;
      msg.split_index = static_cast<std::uint16_t>(emb.config.split_index);
      msg.payload = std::move(z.storage());
      SPLITPRIV_ASSIGN_OR_RETURN(Reply reply, client->Send(msg));
      if (const auto* e = std::get_if<ErrorReply>(&reply)) {
        return absl::AbortedError(
            absl::StrCat("server replied with error code ", e->code));
      }
      probs = std::move(std::get<ResultReply>(reply).probabilities);
    }
    absl::StrAppend(&csv, i, ",", emb.config.split_index, ",",
                    EmbeddingKindName(emb.config.kind), ",", test.primary[i],
                    ",", ArgMax(probs));
    for (float p : probs) absl::StrAppend(&csv, absl::StrFormat(",%.9g", p));
    csv += "\n";
  }
  out << csv;
  if (cfg.Has("out")) {
    SPLITPRIV_RETURN_IF_ERROR(WriteCsv(cfg.Str("out"), csv));
    SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(cfg.Str("out")));
  }
  return absl::OkStatus();
}

// bench ---------------------------------------------------------------------

absl::Status Bench(const RunConfig& cfg, std::ostream& out) {
  SPLITPRIV_ASSIGN_OR_RETURN(SplitDataset data, LoadDataset(cfg.Str("data")));
  SPLITPRIV_ASSIGN_OR_RETURN(ModelFile file, LoadModelFile(cfg.Str("model")));
  BenchConfig bench;
  for (const std::string& s : cfg.List("splits")) {
    std::size_t v = 0;
    if (!absl::SimpleAtoi(s, &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("--splits has a non-integer entry '", s, "'"));
    }
    bench.splits.push_back(v);
  }
  SPLITPRIV_ASSIGN_OR_RETURN(std::uint64_t k, cfg.U64("pca-dim"));
  bench.pca_dim = static_cast<std::uint32_t>(k);
  SPLITPRIV_ASSIGN_OR_RETURN(bench.runs, cfg.Size("runs"));
  SPLITPRIV_ASSIGN_OR_RETURN(std::size_t batch, cfg.Size("batch"));
  batch = std::min(batch, data.test.size());
  if (batch == 0) return absl::InvalidArgumentError("--batch must be >= 1");
  std::vector<std::size_t> rows(batch);
  for (std::size_t i = 0; i < batch; ++i) rows[i] = i;
  SPLITPRIV_ASSIGN_OR_RETURN(
      std::vector<SplitCostRecord> records,
      BenchSplits(file.net, GatherRows(data.test.images, rows), bench));
  std::ostringstream csv;
  WriteSplitCostCsv(records, csv);
  out << csv.str();
  if (cfg.Has("out")) {
    SPLITPRIV_RETURN_IF_ERROR(WriteCsv(cfg.Str("out"), csv.str()));
    SPLITPRIV_RETURN_IF_ERROR(cfg.WriteSidecar(cfg.Str("out")));
  }
  return absl::OkStatus();
}

std::vector<Command> Commands() {
  const OptionSpec model = Opt("model", "", "model file", true);
  const OptionSpec data = Opt("data", "", "dataset file", true);
  const OptionSpec out_req = Opt("out", "", "output path", true);
  const OptionSpec out_opt = Opt("out", "", "optional CSV output path");
  const OptionSpec split = Opt("split", "9", "split index");
  const OptionSpec pca_dim = Opt("pca-dim", "8", "PCA dimension k");
  const OptionSpec sigma = Opt("sigma", "1", "noise standard deviation");
  const OptionSpec kind =
      Opt("kind", "",
          "simple, reduced-simple, siamese, reduced-siamese, "
          "noisy-reduced-simple or advanced");
  const OptionSpec batch = Opt("batch", "16", "minibatch size");
  return {
      {"gen-data",
       "generate the synthetic dataset",
       {SeedOpt(), out_req, Opt("primary-classes", "2", "P"),
        Opt("sensitive-classes", "20", "T"),
        Opt("samples-per-identity", "30", "images per identity"),
        Opt("noise-std", "0.05", "pixel noise std")},
       GenData},
      {"train",
       "train the primary classifier",
       {SeedOpt(), data, out_req, Opt("epochs", "15", "training epochs"),
        Opt("lr", "0.05", "learning rate"), batch},
       Train},
      {"finetune-siamese",
       "Siamese fine-tuning with a contrastive loss at the split",
       {SeedOpt(), model, data, out_req, split,
        Opt("margin", "1", "contrastive margin"),
        Opt("lambda", "1", "contrastive weight"),
        Opt("epochs", "15", "fine-tuning epochs"),
        Opt("lr", "0.05", "learning rate"), batch,
        Opt("pairs-per-epoch", "960", "pairs drawn per epoch")},
       FinetuneSiamese},
      {"fit-pca",
       "fit PCA on training features at the split",
       {SeedOpt(), model, data, out_req, split, pca_dim},
       FitPcaCommand},
      {"build-embedding",
       "assemble an embedding model file",
       {SeedOpt(), model, data, out_req, split, pca_dim, sigma,
        Opt("kind", "simple", kind.help)},
       BuildEmbeddingCommand},
      {"eval-transfer",
       "transfer-learning attack on the sensitive label",
       {SeedOpt(), model, data, out_opt, split, pca_dim, sigma, kind,
        Opt("hidden", "64", "attack hidden width"),
        Opt("epochs", "20", "attack epochs"),
        Opt("lr", "0.05", "learning rate"), batch},
       EvalTransfer},
      {"eval-privacy",
       "rank privacy of noisy features",
       {SeedOpt(), model, data, out_opt, split, pca_dim, sigma, kind,
        Opt("replicas", "4", "noisy copies per test sample")},
       EvalPrivacy},
      {"sweep",
       "accuracy-privacy sweep over a log sigma grid",
       {SeedOpt(), model, data, out_req,
        Opt("siamese-model", "", "Siamese model for Siamese kinds"),
        Opt("kinds", "advanced,noisy-reduced-simple", "comma-separated kinds"),
        split, pca_dim, Opt("sigma-min", "0.01", "smallest sigma"),
        Opt("sigma-max", "10", "largest sigma"),
        Opt("sigma-count", "12", "grid points"),
        Opt("replicas", "4", "noisy copies per test sample"),
        Opt("attack-epochs", "20", "transfer attack epochs"),
        Opt("transfer", "true", "run transfer attacks")},
       Sweep},
      {"serve",
       "host the analyzer until SIGINT or SIGTERM",
       {SeedOpt(), model, Opt("endpoint", "127.0.0.1:7070", "host:port")},
       Serve},
      {"infer",
       "extract features for test samples and classify them",
       {SeedOpt(), model, data, out_opt, split, pca_dim, sigma, kind,
        Opt("endpoint", "", "server host:port"),
        Flag("local", "run the analyzer in-process"),
        Opt("index", "0", "first test sample"),
        Opt("count", "1", "number of samples")},
       Infer},
      {"bench",
       "split-cost benchmark",
       {SeedOpt(), model, data, out_opt, pca_dim,
        Opt("splits", "", "comma-separated split indices (default all)"),
        Opt("runs", "30", "timed runs per split"),
        Opt("batch", "16", "samples per timed run")},
       Bench},
  };
}

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Privacy-preserving split inference toolkit", "splitpriv"};
  app.require_subcommand(1);
  std::vector<Command> commands = Commands();
  struct Bound {
    CLI::App* sub;
    std::string config_path;
    std::map<std::string, std::string> storage;
    std::map<std::string, bool> flag_storage;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  for (const Command& c : commands) {
    auto b = std::make_unique<Bound>();
    b->sub = app.add_subcommand(c.name, c.help);
    b->sub->add_option("--config", b->config_path, "key=value config file");
    for (const OptionSpec& s : c.options) {
      std::string help = s.help;
      if (!s.default_value.empty()) {
        absl::StrAppend(&help, " [", s.default_value, "]");
      }
      if (s.is_flag) {
        b->options[s.name] =
            b->sub->add_flag("--" + s.name, b->flag_storage[s.name], help);
      } else {
        b->options[s.name] =
            b->sub->add_option("--" + s.name, b->storage[s.name], help);
      }
    }
    bound.push_back(std::move(b));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: INVALID_ARGUMENT: " << OneLine(e.what()) << "\n";
    err << app.help();
    return 2;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    Bound& b = *bound[i];
    if (!b.sub->parsed()) continue;
    std::map<std::string, std::string> flags;
    for (const OptionSpec& s : commands[i].options) {
      CLI::Option* opt = b.options[s.name];
      if (opt->count() == 0) continue;
      flags[s.name] = s.is_flag ? "true" : b.storage[s.name];
    }
    std::map<std::string, std::string> file_values;
    if (!b.config_path.empty()) {
      auto text = ReadFileBytes(b.config_path);
      absl::StatusOr<std::map<std::string, std::string>> parsed =
          text.ok() ? ParseKeyValueText(std::string(text->begin(), text->end()))
                    : absl::StatusOr<std::map<std::string, std::string>>(
                          text.status());
      if (!parsed.ok()) {
        err << "error: " << absl::StatusCodeToString(parsed.status().code())
            << ": " << OneLine(std::string(parsed.status().message())) << "\n";
        return 2;
      }
      file_values = *std::move(parsed);
    }
    auto cfg = RunConfig::Resolve(commands[i].options, file_values, flags);
    if (!cfg.ok()) {
      err << "error: " << absl::StatusCodeToString(cfg.status().code()) << ": "
          << OneLine(std::string(cfg.status().message())) << "\n";
      err << b.sub->help();
      return 2;
    }
    const absl::Status status = commands[i].run(*cfg, out);
    if (!status.ok()) {
      err << "error: " << absl::StatusCodeToString(status.code()) << ": "
          << OneLine(std::string(status.message())) << "\n";
      return 1;
    }
    return 0;
  }
  return 2;
}

}  // namespace splitpriv
