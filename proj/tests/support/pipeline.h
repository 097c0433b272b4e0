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

#ifndef SPLITPRIV_TESTS_SUPPORT_PIPELINE_H_
#define SPLITPRIV_TESTS_SUPPORT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace splitpriv::test_support {

struct CliResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// Runs one `splitpriv ...` invocation in-process.
CliResult Cli(const std::vector<std::string>& args);

struct PipelineOptions {
  std::uint64_t seed = 7;
  // Empty strings keep the tool defaults.
  std::string train_epochs;
  std::string siamese_epochs;
  std::string sigma_count;
  bool transfer = true;
};

// gen-data, train, finetune-siamese and sweep through the CLI, writing
// data.spds, plain.spnn, siamese.spnn and sweep.csv into dir.
absl::Status RunPipeline(const std::filesystem::path& dir,
                         const PipelineOptions& options);

// Files RunPipeline produces, in a fixed order.
std::vector<std::string> PipelineArtifacts();

}  // namespace splitpriv::test_support

#endif  // SPLITPRIV_TESTS_SUPPORT_PIPELINE_H_
