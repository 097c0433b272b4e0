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

#include "run_config.h"

#include <cmath>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "splitpriv/byte_io.h"

namespace splitpriv {

absl::StatusOr<std::map<std::string, std::string>> ParseKeyValueText(
    const std::string& text) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": expected key=value"));
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    if (key.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": empty key"));
    }
    if (!out.emplace(key, value).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_no, ": duplicate key '", key, "'"));
    }
  }
  return out;
}

absl::StatusOr<RunConfig> RunConfig::Resolve(
    const std::vector<OptionSpec>& specs,
    const std::map<std::string, std::string>& file_values,
    const std::map<std::string, std::string>& flag_values) {
  RunConfig cfg;
  std::map<std::string, const OptionSpec*> known;
  for (const OptionSpec& s : specs) {
    known[s.name] = &s;
    if (!s.default_value.empty()) cfg.values_[s.name] = s.default_value;
  }
  for (const auto& [key, value] : file_values) {
    if (!known.contains(key) || key == "config") {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
    cfg.values_[key] = value;
  }
  for (const auto& [key, value] : flag_values) cfg.values_[key] = value;
  for (const OptionSpec& s : specs) {
    if (s.required && !cfg.Has(s.name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("missing required --", s.name));
    }
  }
  return cfg;
}

bool RunConfig::Has(const std::string& key) const {
  auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

std::string RunConfig::Str(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? std::string() : it->second;
}

absl::StatusOr<std::uint64_t> RunConfig::U64(const std::string& key) const {
  std::uint64_t v = 0;
  if (!absl::SimpleAtoi(Str(key), &v)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "--", key, " expects a non-negative integer, got '", Str(key), "'"));
  }
  return v;
}

absl::StatusOr<std::size_t> RunConfig::Size(const std::string& key) const {
  auto v = U64(key);
  if (!v.ok()) return v.status();
  return static_cast<std::size_t>(*v);
}

absl::StatusOr<double> RunConfig::Double(const std::string& key) const {
  double v = 0.0;
  if (!absl::SimpleAtod(Str(key), &v) || !std::isfinite(v)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "--", key, " expects a finite number, got '", Str(key), "'"));
  }
  return v;
}

absl::StatusOr<float> RunConfig::Float(const std::string& key) const {
  auto v = Double(key);
  if (!v.ok()) return v.status();
  return static_cast<float>(*v);
}

absl::StatusOr<bool> RunConfig::Bool(const std::string& key) const {
  bool v = false;
  if (!absl::SimpleAtob(Str(key), &v)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "--", key, " expects true or false, got '", Str(key), "'"));
  }
  return v;
}

std::vector<std::string> RunConfig::List(const std::string& key) const {
  std::vector<std::string> out;
  for (absl::string_view part : absl::StrSplit(Str(key), ',')) {
    part = absl::StripAsciiWhitespace(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

std::string RunConfig::Serialize() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    absl::StrAppend(&out, key, "=", value, "\n");
  }
  return out;
}

absl::Status RunConfig::WriteSidecar(
    const std::filesystem::path& output) const {
  std::filesystem::path sidecar = output;
  sidecar += ".config";
  return WriteTextFile(sidecar, Serialize());
}

}  // namespace splitpriv
