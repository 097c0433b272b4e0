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

#ifndef SPLITPRIV_TOOLS_RUN_CONFIG_H_
#define SPLITPRIV_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace splitpriv {

struct OptionSpec {
  std::string name;           // flag and config key, without dashes
  std::string default_value;  // empty: no default
  std::string help;
  bool required = false;
  bool is_flag = false;  // boolean switch; value "true" or "false"
};

// Parses "key = value" lines. Blank lines and lines starting with '#' are
// skipped; duplicate keys and lines without '=' are errors.
absl::StatusOr<std::map<std::string, std::string>> ParseKeyValueText(
    const std::string& text);

// Resolved settings for one subcommand: defaults, then the config file,
// then explicit flags.
class RunConfig {
 public:
  static absl::StatusOr<RunConfig> Resolve(
      const std::vector<OptionSpec>& specs,
      const std::map<std::string, std::string>& file_values,
      const std::map<std::string, std::string>& flag_values);

  bool Has(const std::string& key) const;
  std::string Str(const std::string& key) const;
  absl::StatusOr<std::uint64_t> U64(const std::string& key) const;
  absl::StatusOr<std::size_t> Size(const std::string& key) const;
  absl::StatusOr<double> Double(const std::string& key) const;
  absl::StatusOr<float> Float(const std::string& key) const;
  absl::StatusOr<bool> Bool(const std::string& key) const;
  // Comma-separated list.
  std::vector<std::string> List(const std::string& key) const;

  // Sorted "key=value" lines, loadable again with --config.
  std::string Serialize() const;
  // Writes Serialize() to <output>.config.
  absl::Status WriteSidecar(const std::filesystem::path& output) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace splitpriv

#endif  // SPLITPRIV_TOOLS_RUN_CONFIG_H_
