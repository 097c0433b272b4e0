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

#include "splitpriv/network.h"

#include <cstdint>
#include <vector>

#include "absl/strings/match.h"
#include "gtest/gtest.h"
#include "splitpriv/byte_io.h"
#include "splitpriv/classifier.h"
#include "splitpriv/model_io.h"
#include "splitpriv/rng.h"
#include "support/fixtures.h"

namespace splitpriv {
namespace {

Tensor RandomBatch(const Shape& sample, std::size_t n, std::uint64_t seed) {
  Shape s{n};
  s.insert(s.end(), sample.begin(), sample.end());
  Tensor t(s);
  Rng rng(seed);
  for (float& v : t.data()) v = static_cast<float>(rng.Uniform(-1, 1));
  return t;
}

Network FourLayerNet() {
  auto net = Network::Initialize(
      {5}, {Layer::Dense(6), Layer::ReLU(), Layer::Dense(3), Layer::Softmax()},
      3);
  EXPECT_TRUE(net.ok());
  return *net;
}

TEST(NetworkTest, CreateRejectsBadChains) {
  EXPECT_FALSE(Network::Create({4}, {}).ok());
  EXPECT_FALSE(Network::Initialize({4}, {Layer::Conv2D(2, 3, 3)}, 1).ok());
  // Weighted layer missing its weights.
  EXPECT_FALSE(Network::Create({4}, {Layer::Dense(2)}).ok());
}

TEST(NetworkTest, ForwardRejectsShapeMismatchWithDiagnostic) {
  Network net = FourLayerNet();
  auto acts = Forward(net, Tensor({2, 4}));
  ASSERT_FALSE(acts.ok());
  EXPECT_NE(acts.status().message().find("[2,4]"), std::string::npos)
      << acts.status();
}

TEST(NetworkTest, ForwardKeepsEveryActivation) {
  Network net = FourLayerNet();
  auto acts = Forward(net, RandomBatch({5}, 3, 1));
  ASSERT_TRUE(acts.ok());
  ASSERT_EQ(acts->size(), 5u);
  EXPECT_EQ((*acts)[1].shape(), (Shape{3, 6}));
  EXPECT_EQ(acts->back().shape(), (Shape{3, 3}));
}

TEST(NetworkTest, DenseSquaredErrorGradientIsClosedForm) {
  // Small integers keep every product exact.
  auto net = Network::Create(
      {3}, {[] {
        Layer d = Layer::Dense(2);
        d.weights() = {Tensor({3, 2}, std::vector<float>{1, -1, 2, 0, -3, 1}),
                       Tensor({2}, std::vector<float>{1, 2})};
        return d;
      }()});
  ASSERT_TRUE(net.ok());
  const Tensor x({1, 3}, std::vector<float>{1, 2, -1});
  const std::vector<float> target = {0, 1};
  auto acts = Forward(*net, x);
  ASSERT_TRUE(acts.ok());
  const Tensor& out = acts->back();
  // out = W^T x + b = [1+4+3+1, -1+0-1+2] = [9, 0]
  ASSERT_EQ(out.storage(), (std::vector<float>{9, 0}));
  Tensor g({1, 2});
  for (int j = 0; j < 2; ++j) g[j] = 2 * (out[j] - target[j]);
  auto grads = Backward(*net, *acts, g);
  ASSERT_TRUE(grads.ok());
  const Tensor& gw = grads->per_layer[0][0];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_EQ(gw[i * 2 + j], x[i] * g[j]);
  }
  EXPECT_EQ(grads->per_layer[0][1].storage(), g.storage());
}

TEST(NetworkTest, ZeroLossGradientGivesZeroWeightGradients) {
  Network net = FourLayerNet();
  auto acts = Forward(net, RandomBatch({5}, 4, 2));
  ASSERT_TRUE(acts.ok());
  auto grads = Backward(net, *acts, Tensor(acts->back().shape()));
  ASSERT_TRUE(grads.ok());
  for (const auto& layer : grads->per_layer) {
    for (const Tensor& g : layer) {
      for (float v : g.data()) EXPECT_EQ(v, 0.0f);
    }
  }
}

TEST(NetworkTest, BackwardRejectsForeignActivations) {
  Network net = FourLayerNet();
  auto acts = Forward(net, RandomBatch({5}, 2, 2));
  ASSERT_TRUE(acts.ok());
  acts->pop_back();
  EXPECT_FALSE(Backward(net, *acts, Tensor({2, 3})).ok());
}

TEST(NetworkTest, GradientShapesMatchWeights) {
  auto net = MakeDeskScaleClassifier(2, 1);
  ASSERT_TRUE(net.ok());
  auto acts = Forward(*net, RandomBatch({16, 16, 1}, 2, 3));
  ASSERT_TRUE(acts.ok());
  auto grads = Backward(*net, *acts, Tensor(acts->back().shape(), 0.1f));
  ASSERT_TRUE(grads.ok());
  for (std::size_t l = 0; l < net->num_layers(); ++l) {
    ASSERT_EQ(grads->per_layer[l].size(), net->layers()[l].weights().size());
    for (std::size_t w = 0; w < grads->per_layer[l].size(); ++w) {
      EXPECT_EQ(grads->per_layer[l][w].shape(),
                net->layers()[l].weights()[w].shape());
    }
  }
}

TEST(SgdTest, StepAppliesLearningRate) {
  auto net =
      Network::Create({1}, {[] {
                        Layer d = Layer::Dense(1);
                        d.weights() = {Tensor({1, 1}, 1.0f), Tensor({1}, 1.0f)};
                        return d;
                      }()});
  ASSERT_TRUE(net.ok());
  Gradients g = ZeroGradients(*net);
  g.per_layer[0][0][0] = 2.0f;
  SgdConfig cfg;
  cfg.learning_rate = 0.1f;
  ASSERT_TRUE(SgdStep(&*net, g, cfg).ok());
  EXPECT_FLOAT_EQ(net->layers()[0].weights()[0][0], 0.8f);
  EXPECT_EQ(net->layers()[0].weights()[1][0], 1.0f);

  Network before = *net;
  cfg.learning_rate = 0.0f;
  ASSERT_TRUE(SgdStep(&*net, g, cfg).ok());
  EXPECT_TRUE(*net == before);
}

TEST(SgdTest, ConfigValidation) {
  SgdConfig cfg;
  EXPECT_TRUE(cfg.Validate().ok());
  cfg.learning_rate = -0.1f;
  EXPECT_FALSE(cfg.Validate().ok());
  cfg.learning_rate = std::numeric_limits<float>::infinity();
  EXPECT_FALSE(cfg.Validate().ok());
  cfg = SgdConfig{};
  cfg.batch_size = 0;
  EXPECT_FALSE(cfg.Validate().ok());
}

TEST(SgdTest, IdenticalRunsGiveBitIdenticalWeights) {
  auto run = [] {
    Network net = FourLayerNet();
    Tensor x = RandomBatch({5}, 40, 9);
    std::vector<std::uint16_t> labels(40);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 3;
    SgdConfig cfg;
    cfg.epochs = 3;
    cfg.batch_size = 8;
    EXPECT_TRUE(TrainClassifier(&net, x, labels, cfg).ok());
    return net;
  };
  EXPECT_TRUE(run() == run());
}

TEST(SplitAtTest, ComposedHalvesEqualMonolithOnFourLayerNet) {
  Network net = FourLayerNet();
  const Tensor x = RandomBatch({5}, 16, 4);
  auto halves = SplitAt(net, 2);
  ASSERT_TRUE(halves.ok());
  auto mid = ForwardOutput(halves->first, x);
  ASSERT_TRUE(mid.ok());
  auto composed = ForwardOutput(halves->second, *mid);
  auto mono = ForwardOutput(net, x);
  ASSERT_TRUE(composed.ok() && mono.ok());
  EXPECT_EQ(composed->storage(), mono->storage());
}

TEST(SplitAtTest, EveryDeskScaleSplitComposesExactly) {
  auto net = MakeDeskScaleClassifier(2, 4);
  ASSERT_TRUE(net.ok());
  const Tensor x = RandomBatch({16, 16, 1}, 8, 5);
  auto mono = ForwardOutput(*net, x);
  ASSERT_TRUE(mono.ok());
  for (std::size_t i = 1; i < net->num_layers(); ++i) {
    auto halves = SplitAt(*net, i);
    ASSERT_TRUE(halves.ok());
    auto out = ForwardOutput(halves->second, *ForwardOutput(halves->first, x));
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(out->storage(), mono->storage()) << "split " << i;
  }
}

TEST(SplitAtTest, Bounds) {
  Network net = FourLayerNet();
  auto last = SplitAt(net, net.num_layers() - 1);
  ASSERT_TRUE(last.ok());
  EXPECT_EQ(last->second.num_layers(), 1u);
  EXPECT_EQ(last->second.layers()[0].kind(), LayerKind::kSoftmax);
  EXPECT_FALSE(SplitAt(net, 0).ok());
  EXPECT_FALSE(SplitAt(net, net.num_layers()).ok());
}

TEST(BoundaryFeaturesTest, FlattensAndChunks) {
  auto net = MakeDeskScaleClassifier(2, 4);
  ASSERT_TRUE(net.ok());
  const Tensor x = RandomBatch({16, 16, 1}, 5, 6);
  auto a = BoundaryFeatures(*net, x, 3, 2);
  auto b = BoundaryFeatures(*net, x, 3, 64);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->shape(), (Shape{5, 512}));
  EXPECT_EQ(a->storage(), b->storage());
  EXPECT_FALSE(BoundaryFeatures(*net, x, 12).ok());
}

TEST(ModelIoTest, RoundTripPreservesForward) {
  const auto& m = test_support::DefaultModels();
  const auto dir = test_support::MakeTempDir("model");
  for (const Network* net : {&m.plain, &m.siamese}) {
    ASSERT_TRUE(SaveModel(*net, dir / "m.spnn").ok());
    auto back = LoadModel(dir / "m.spnn");
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_TRUE(*back == *net);
    auto p1 = Predict(*net, m.data.test.images);
    auto p2 = Predict(*back, m.data.test.images);
    EXPECT_EQ(p1->storage(), p2->storage());
  }
}

TEST(ModelIoTest, DistinctErrors) {
  ByteWriter w;
  SerializeNetwork(FourLayerNet(), &w);
  std::vector<std::uint8_t> bytes = w.Release();

  std::vector<std::uint8_t> bad_magic = bytes;
  bad_magic[0] = 'X';
  ByteReader r1(bad_magic);
  auto s1 = ParseNetwork(&r1);
  ASSERT_FALSE(s1.ok());
  EXPECT_EQ(s1.status().code(), absl::StatusCode::kDataLoss);
  EXPECT_TRUE(absl::StrContains(s1.status().message(), "bad magic"));

  std::vector<std::uint8_t> bad_version = bytes;
  bad_version[4] = 9;
  ByteReader r2(bad_version);
  auto s2 = ParseNetwork(&r2);
  ASSERT_FALSE(s2.ok());
  EXPECT_EQ(s2.status().code(), absl::StatusCode::kFailedPrecondition);

  for (std::size_t cut : {std::size_t{5}, bytes.size() / 2, bytes.size() - 1}) {
    std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + cut);
    ByteReader r3(truncated);
    auto s3 = ParseNetwork(&r3);
    ASSERT_FALSE(s3.ok()) << cut;
    EXPECT_EQ(s3.status().code(), absl::StatusCode::kOutOfRange) << cut;
    EXPECT_TRUE(absl::StrContains(s3.status().message(), "truncated"));
  }
}

TEST(ModelIoTest, LoadModelRejectsTrailingSections) {
  ByteWriter w;
  SerializeNetwork(FourLayerNet(), &w);
  w.Tag("JUNK");
  const auto dir = test_support::MakeTempDir("model_trailing");
  ASSERT_TRUE(WriteFileBytes(dir / "m.spnn", w.bytes()).ok());
  EXPECT_FALSE(LoadModel(dir / "m.spnn").ok());
}

TEST(ModelIoTest, HashIsTruncatedSha256) {
  // SHA-256("abc") = ba7816bf 8f01cfea ...
  const std::uint8_t abc[] = {'a', 'b', 'c'};
  const ModelHash h = ComputeModelHash(abc);
  const ModelHash want = {0xba, 0x78, 0x16, 0xbf, 0x8f, 0x01, 0xcf, 0xea};
  EXPECT_EQ(h, want);
}

}  // namespace
}  // namespace splitpriv
