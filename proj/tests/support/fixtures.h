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

#ifndef SPLITPRIV_TESTS_SUPPORT_FIXTURES_H_
#define SPLITPRIV_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "splitpriv/datagen.h"
#include "splitpriv/network.h"

namespace splitpriv::test_support {

// Dataset, trained classifier and its Siamese fine-tune at library defaults
// (seed 7), built once per process.
struct TrainedModels {
  SplitDataset data;
  Network plain;
  Network siamese;
};
const TrainedModels& DefaultModels();

// SPNN bytes of a bare network, without embedding sections.
std::vector<std::uint8_t> PlainModelBytes(const Network& net);

// Fresh directory under the system temp dir; removed at process exit.
std::filesystem::path MakeTempDir(const std::string& tag);

}  // namespace splitpriv::test_support

#endif  // SPLITPRIV_TESTS_SUPPORT_FIXTURES_H_
