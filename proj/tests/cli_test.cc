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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "splitpriv/embedding.h"
#include "splitpriv/server.h"
#include "support/fixtures.h"
#include "support/pipeline.h"

namespace splitpriv {
namespace {

using test_support::Cli;
using test_support::CliResult;
using test_support::MakeTempDir;
using ::testing::HasSubstr;
using ::testing::StartsWith;

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> Lines(const std::string& text) {
  return absl::StrSplit(text, '\n', absl::SkipEmpty());
}

// A short pipeline shared by the tests below.
class CliPipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new std::filesystem::path(MakeTempDir("cli"));
    test_support::PipelineOptions opts;
    opts.train_epochs = "4";
    opts.siamese_epochs = "2";
    opts.sigma_count = "3";
    opts.transfer = false;
    status_ = new absl::Status(test_support::RunPipeline(*dir_, opts));
  }
  static void TearDownTestSuite() {
    delete dir_;
    delete status_;
  }
  void SetUp() override { ASSERT_TRUE(status_->ok()) << *status_; }
  static std::string P(const char* name) { return (*dir_ / name).string(); }

  static std::filesystem::path* dir_;
  static absl::Status* status_;
};

std::filesystem::path* CliPipelineTest::dir_ = nullptr;
absl::Status* CliPipelineTest::status_ = nullptr;

TEST_F(CliPipelineTest, GenDataIsByteIdenticalAcrossRuns) {
  const std::string again = P("again.spds");
  ASSERT_EQ(Cli({"gen-data", "--seed", "7", "--out", again}).exit_code, 0);
  EXPECT_EQ(ReadAll(again), ReadAll(P("data.spds")));
  EXPECT_EQ(ReadAll(again).size(), 20u + 600u * 1028u);
  const std::string other = P("other.spds");
  ASSERT_EQ(Cli({"gen-data", "--seed", "8", "--out", other}).exit_code, 0);
  EXPECT_NE(ReadAll(other), ReadAll(P("data.spds")));
}

TEST_F(CliPipelineTest, OutputsCarryConfigSidecars) {
  const std::string sidecar = ReadAll(P("data.spds") + ".config");
  EXPECT_THAT(sidecar, HasSubstr("seed=7\n"));
  EXPECT_THAT(sidecar, HasSubstr("sensitive-classes=20\n"));
}

TEST_F(CliPipelineTest, SweepHasOneRowPerKindAndSigma) {
  std::vector<std::string> lines = Lines(ReadAll(P("sweep.csv")));
  ASSERT_EQ(lines.size(), 1u + 2u * 3u);
  EXPECT_EQ(lines[0],
            "sigma,split_index,pca_dim,kind,primary_acc,transfer_acc,"
            "privacy_total");
  for (std::size_t i = 1; i <= 3; ++i) {
    EXPECT_THAT(lines[i], HasSubstr(",advanced,"));
    EXPECT_THAT(lines[i + 3], HasSubstr(",noisy-reduced-simple,"));
  }
  EXPECT_THAT(lines[1], StartsWith("0.01,9,8,"));
  EXPECT_THAT(lines[3], StartsWith("10,9,8,"));
}

TEST_F(CliPipelineTest, LocalAndRemoteInferenceAgree) {
  const std::string emb = P("advanced.spnn");
  ASSERT_EQ(Cli({"build-embedding", "--model", P("siamese.spnn"), "--data",
                 P("data.spds"), "--out", emb, "--kind", "advanced", "--sigma",
                 "0.1"})
                .exit_code,
            0);
  const std::vector<std::string> common = {
      "infer",  "--model",  emb,       "--data", P("data.spds"),
      "--kind", "advanced", "--sigma", "0.1",    "--index",
      "3",      "--count",  "5"};

  std::vector<std::string> local_args = common;
  local_args.push_back("--local");
  CliResult local = Cli(local_args);
  ASSERT_EQ(local.exit_code, 0) << local.err;
  ASSERT_EQ(Lines(local.out).size(), 6u);
  EXPECT_THAT(local.out, StartsWith("index,split_index,kind,label,predicted,"
                                    "p0,p1\n3,9,advanced,"));

  auto file = LoadModelFile(emb);
  ASSERT_TRUE(file.ok()) << file.status();
  auto server = AnalyzerServer::Create(*file);
  ASSERT_TRUE(server.ok());
  ASSERT_TRUE((*server)->Start(Endpoint{"127.0.0.1", 0}).ok());
  std::vector<std::string> remote_args = common;
  remote_args.push_back("--endpoint");
  remote_args.push_back(absl::StrCat("127.0.0.1:", (*server)->port()));
  CliResult remote = Cli(remote_args);
  (*server)->Stop();
  ASSERT_EQ(remote.exit_code, 0) << remote.err;
  EXPECT_EQ(remote.out, local.out);
}

TEST_F(CliPipelineTest, RemoteWithAnotherModelIsRefused) {
  const std::string emb = P("simple.spnn");
  ASSERT_EQ(Cli({"build-embedding", "--model", P("plain.spnn"), "--data",
                 P("data.spds"), "--out", emb, "--kind", "simple"})
                .exit_code,
            0);
  auto other = LoadModelFile(P("plain.spnn"));
  ASSERT_TRUE(other.ok());
  auto server = AnalyzerServer::Create(*other);
  ASSERT_TRUE(server.ok());
  ASSERT_TRUE((*server)->Start(Endpoint{"127.0.0.1", 0}).ok());
  CliResult r = Cli({"infer", "--model", emb, "--data", P("data.spds"),
                     "--kind", "simple", "--endpoint",
                     absl::StrCat("127.0.0.1:", (*server)->port())});
  (*server)->Stop();
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_THAT(r.err, HasSubstr("error code 1"));
}

TEST_F(CliPipelineTest, EvaluationCommandsRun) {
  CliResult privacy = Cli({"eval-privacy", "--model", P("plain.spnn"), "--data",
                           P("data.spds"), "--kind", "noisy-reduced-simple",
                           "--sigma", "1", "--replicas", "1"});
  EXPECT_EQ(privacy.exit_code, 0) << privacy.err;
  EXPECT_FALSE(privacy.out.empty());

  CliResult transfer =
      Cli({"eval-transfer", "--model", P("plain.spnn"), "--data",
           P("data.spds"), "--kind", "simple", "--epochs", "1"});
  EXPECT_EQ(transfer.exit_code, 0) << transfer.err;

  CliResult bench = Cli({"bench", "--model", P("plain.spnn"), "--data",
                         P("data.spds"), "--splits", "3,9", "--batch", "2"});
  ASSERT_EQ(bench.exit_code, 0) << bench.err;
  EXPECT_EQ(Lines(bench.out).size(), 3u);
}

TEST_F(CliPipelineTest, ConfigFileIsHonouredAndStrict) {
  const std::filesystem::path cfg = *dir_ / "gen.cfg";
  std::ofstream(cfg) << "# same as the flags\nseed = 7\n";
  const std::string out = P("from_config.spds");
  ASSERT_EQ(Cli({"gen-data", "--config", cfg.string(), "--out", out}).exit_code,
            0);
  EXPECT_EQ(ReadAll(out), ReadAll(P("data.spds")));

  std::ofstream(cfg) << "seed = 7\nsede = 1\n";
  CliResult bad = Cli({"gen-data", "--config", cfg.string(), "--out", out});
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_THAT(bad.err, StartsWith("error: INVALID_ARGUMENT: unknown config "
                                  "key 'sede'"));
}

TEST(CliTest, UsageErrorsExitWithTwo) {
  EXPECT_EQ(Cli({}).exit_code, 2);
  EXPECT_EQ(Cli({"no-such-command"}).exit_code, 2);
  CliResult missing = Cli({"gen-data"});
  EXPECT_EQ(missing.exit_code, 2);
  EXPECT_THAT(missing.err, HasSubstr("missing required --out"));
  EXPECT_EQ(Cli({"gen-data", "--out", "x", "--bogus", "1"}).exit_code, 2);
  const std::string missing_cfg = (MakeTempDir("cfg") / "none.cfg").string();
  EXPECT_EQ(Cli({"gen-data", "--config", missing_cfg, "--out", "x"}).exit_code,
            2);
}

TEST(CliTest, RuntimeFailuresExitWithOne) {
  const std::filesystem::path dir = MakeTempDir("fail");
  CliResult r = Cli({"train", "--data", (dir / "absent.spds").string(), "--out",
                     (dir / "m.spnn").string()});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_THAT(r.err, StartsWith("error: "));
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  CliResult bad_value =
      Cli({"gen-data", "--seed", "seven", "--out", (dir / "d.spds").string()});
  EXPECT_EQ(bad_value.exit_code, 1);
  EXPECT_THAT(bad_value.err, HasSubstr("--seed"));
}

TEST(CliTest, HelpExitsWithZero) {
  CliResult r = Cli({"--help"});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_THAT(r.out, HasSubstr("gen-data"));
  EXPECT_THAT(r.out, HasSubstr("sweep"));
}

}  // namespace
}  // namespace splitpriv
