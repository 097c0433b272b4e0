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

#include "support/fixtures.h"

#include <stdlib.h>

#include <cstdio>
#include <mutex>
#include <system_error>
#include <vector>

#include "splitpriv/classifier.h"
#include "splitpriv/embedding.h"
#include "splitpriv/siamese.h"

namespace splitpriv::test_support {
namespace {

void Die(const absl::Status& status) {
  std::fprintf(stderr, "fixture setup failed: %s\n", status.ToString().c_str());
  std::abort();
}

TrainedModels* Build() {
  auto* m = new TrainedModels;
  auto data = Generate(DatasetSpec{});
  if (!data.ok()) Die(data.status());
  m->data = *std::move(data);
  const SgdConfig sgd;
  auto net = MakeDeskScaleClassifier(m->data.train.primary_classes, sgd.seed);
  if (!net.ok()) Die(net.status());
  m->plain = *std::move(net);
  auto log = TrainClassifier(&m->plain, m->data.train.images,
                             m->data.train.primary, sgd);
  if (!log.ok()) Die(log.status());
  m->siamese = m->plain;
  auto slog = SiameseFinetune(&m->siamese, m->data.train, SiameseConfig{});
  if (!slog.ok()) Die(slog.status());
  return m;
}

std::vector<std::filesystem::path>& TempDirs() {
  static auto* dirs = new std::vector<std::filesystem::path>;
  return *dirs;
}

void RemoveTempDirs() {
  for (const auto& d : TempDirs()) {
    std::error_code ec;
    std::filesystem::remove_all(d, ec);
  }
}

}  // namespace

const TrainedModels& DefaultModels() {
  static const TrainedModels* models = Build();
  return *models;
}

std::vector<std::uint8_t> PlainModelBytes(const Network& net) {
  ModelFile file;
  file.net = net;
  return SerializeModelFile(file);
}

std::filesystem::path MakeTempDir(const std::string& tag) {
  static std::once_flag once;
  std::call_once(once, [] { std::atexit(RemoveTempDirs); });
  std::string templ = (std::filesystem::temp_directory_path() /
                       ("splitpriv_" + tag + "_XXXXXX"))
                          .string();
  if (mkdtemp(templ.data()) == nullptr) {
    std::perror("mkdtemp");
    std::abort();
  }
  TempDirs().push_back(templ);
  return templ;
}

}  // namespace splitpriv::test_support
