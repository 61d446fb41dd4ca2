// Copyright 2026 The lexstyle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexstyle/nn.h"

#include <gtest/gtest.h>

#include <cmath>

#include "gradcheck.h"
#include "lexstyle/classifier.h"
#include "lexstyle/errors.h"

namespace lexstyle::nn {
namespace {

using lexstyle::testing::CheckGradients;
using lexstyle::testing::Dot;
using lexstyle::testing::FillUniform;

TEST(LstmStepTest, ZeroWeightsGiveHalfGatesAndZeroState) {
  const auto params = LstmCellParams::Zeros(3, 2);
  const Vec x = {0.3, -1.0, 2.0}, h = {0.0, 0.0}, c = {0.0, 0.0};
  const auto s = LstmStep(params, x, h, c);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(s.f[i], 0.5);
    EXPECT_DOUBLE_EQ(s.i[i], 0.5);
    EXPECT_DOUBLE_EQ(s.o[i], 0.5);
    EXPECT_DOUBLE_EQ(s.g[i], 0.0);
    EXPECT_DOUBLE_EQ(s.c[i], 0.0);
    EXPECT_DOUBLE_EQ(s.h[i], 0.0);
  }
}

TEST(LstmStepTest, ZeroWeightsHalveTheCell) {
  const auto params = LstmCellParams::Zeros(2, 3);
  const Vec x = {1.0, 1.0}, h = {0.1, 0.2, 0.3}, c = {2.0, -4.0, 0.5};
  const auto s = LstmStep(params, x, h, c);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(s.c[i], 0.5 * c[i]);
    EXPECT_DOUBLE_EQ(s.h[i], 0.5 * std::tanh(0.5 * c[i]));
  }
}

TEST(LstmStepTest, DimensionMismatchIsContractError) {
  const auto params = LstmCellParams::Zeros(3, 2);
  const Vec x = {1.0, 2.0}, h = {0.0, 0.0}, c = {0.0, 0.0};
  EXPECT_THROW(LstmStep(params, x, h, c), ContractError);
}

TEST(LstmStepTest, HiddenStateStaysInsideUnitInterval) {
  Rng rng(3);
  auto params = LstmCellParams::Zeros(4, 5);
  auto grads = LstmCellParams::Zeros(4, 5);
  for (auto& r : params.Refs("p", grads)) FillUniform(r.value, rng, 5.0);
  Vec x(4), h(5, 0.0), c(5, 0.0);
  for (int step = 0; step < 50; ++step) {
    FillUniform(x, rng, 10.0);
    const auto s = LstmStep(params, x, h, c);
    for (double v : s.h) {
      EXPECT_GT(v, -1.0);
      EXPECT_LT(v, 1.0);
    }
    h = s.h;
    c = s.c;
  }
}

TEST(LstmStepTest, InitializeSetsForgetBiasToOne) {
  Rng rng(1);
  auto params = LstmCellParams::Zeros(3, 4);
  params.Initialize(rng);
  for (double b : params.b_f) EXPECT_EQ(b, 1.0);
  for (double b : params.b_i) EXPECT_EQ(b, 0.0);
}

class LayerGradientTest : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(LayerGradientTest, LstmStep) {
  const auto r = lexstyle::testing::GradCheckLstmStep(GetParam());
  EXPECT_TRUE(r.ok()) << r.worst << " rel error " << r.max_rel_error;
}

TEST_P(LayerGradientTest, Conv1d) {
  const auto r = lexstyle::testing::GradCheckConv(GetParam());
  EXPECT_TRUE(r.ok()) << r.worst << " rel error " << r.max_rel_error;
}

TEST_P(LayerGradientTest, Dense) {
  const auto r = lexstyle::testing::GradCheckDense(GetParam());
  EXPECT_TRUE(r.ok()) << r.worst << " rel error " << r.max_rel_error;
}

TEST_P(LayerGradientTest, BceHead) {
  const auto r = lexstyle::testing::GradCheckBceHead(GetParam());
  EXPECT_TRUE(r.ok()) << r.worst << " rel error " << r.max_rel_error;
}

TEST_P(LayerGradientTest, LstmSequence) {
  Rng rng(GetParam());
  auto params = LstmCellParams::Zeros(3, 4);
  auto grads = LstmCellParams::Zeros(3, 4);
  auto refs = params.Refs("lstm", grads);
  for (auto& r : refs) FillUniform(r.value, rng);
  Matrix xs(5, 3), dxs(5, 3);
  Vec weights(4);
  FillUniform(xs.data, rng, 1.0);
  FillUniform(weights, rng, 1.0);
  refs.push_back({"xs", xs.data, dxs.data});
  auto loss = [&] { return Dot(weights, LstmForward(params, xs, nullptr)); };
  auto backprop = [&] {
    LstmSequenceCache cache;
    LstmForward(params, xs, &cache);
    const Matrix d = LstmBackward(params, cache, weights, grads);
    for (std::size_t i = 0; i < d.data.size(); ++i) dxs.data[i] += d.data[i];
  };
  const auto r = CheckGradients(refs, loss, backprop);
  EXPECT_TRUE(r.ok()) << r.worst << " rel error " << r.max_rel_error;
}

TEST_P(LayerGradientTest, Embedding) {
  Rng rng(GetParam());
  auto params = Embedding::Zeros(6, 3);
  auto grads = Embedding::Zeros(6, 3);
  auto refs = params.Refs("emb", grads);
  FillUniform(refs[0].value, rng);
  const std::vector<int> ids = {0, 3, 3, 5};
  Matrix weights(ids.size(), 3);
  FillUniform(weights.data, rng, 1.0);
  auto loss = [&] { return Dot(params.Forward(ids).data, weights.data); };
  auto backprop = [&] { params.Backward(ids, weights, grads); };
  const auto r = CheckGradients(refs, loss, backprop);
  EXPECT_TRUE(r.ok()) << r.worst << " rel error " << r.max_rel_error;
}

// Dropout off: the full conv -> ReLU -> pool -> LSTM channel.
TEST_P(LayerGradientTest, ConvLstmChannel) {
  Rng rng(GetParam());
  auto ch = ConvLstmChannel::Zeros(3, 4, 3, 2, 3);
  auto grads = ConvLstmChannel::Zeros(3, 4, 3, 2, 3);
  auto refs = ch.Refs("ch", grads);
  for (auto& r : refs) FillUniform(r.value, rng);
  Matrix input(9, 3), dinput(9, 3);
  Vec weights(3);
  FillUniform(input.data, rng, 1.0);
  FillUniform(weights, rng, 1.0);
  refs.push_back({"input", input.data, dinput.data});
  auto loss = [&] { return Dot(weights, ch.Forward(input, 0.0, 0.0, nullptr, nullptr)); };
  auto backprop = [&] {
    ConvLstmChannel::Cache cache;
    ch.Forward(input, 0.0, 0.0, nullptr, &cache);
    const Matrix d = ch.Backward(cache, weights, grads);
    for (std::size_t i = 0; i < d.data.size(); ++i) dinput.data[i] += d.data[i];
  };
  const auto r = CheckGradients(refs, loss, backprop);
  EXPECT_TRUE(r.ok()) << r.worst << " rel error " << r.max_rel_error;
}

INSTANTIATE_TEST_SUITE_P(Seeds, LayerGradientTest, ::testing::Range<std::uint64_t>(1, 11));

TEST(ConvTest, IdentityKernelLeavesSequenceUnchanged) {
  auto params = ConvLayerParams::Zeros(1, 1, 1);
  params.weight(0, 0, 0) = 1.0;
  Matrix seq(4, 1);
  seq.data = {3.0, -1.0, 0.5, 7.0};
  EXPECT_EQ(Conv1dForward(params, seq), seq);
}

TEST(ConvTest, DifferenceKernel) {
  auto params = ConvLayerParams::Zeros(1, 2, 1);
  params.weight(0, 0, 0) = 1.0;
  params.weight(0, 1, 0) = -1.0;
  Matrix seq(3, 1);
  seq.data = {3.0, 5.0, 2.0};
  const Matrix out = Conv1dForward(params, seq);
  ASSERT_EQ(out.rows, 2u);
  EXPECT_DOUBLE_EQ(out(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(out(1, 0), 3.0);

  const PoolResult pooled = MaxPool1d(out, 2);
  ASSERT_EQ(pooled.out.rows, 1u);
  EXPECT_DOUBLE_EQ(pooled.out(0, 0), 3.0);
}

TEST(ConvTest, ShortSequenceAsksCallerToPad) {
  const auto params = ConvLayerParams::Zeros(2, 4, 1);
  try {
    Conv1dForward(params, Matrix(3, 1));
    FAIL() << "expected ContractError";
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("pad"), std::string::npos) << e.what();
  }
}

TEST(PoolTest, TrailingPartialWindowIsKept) {
  Matrix in(5, 1);
  in.data = {1.0, 4.0, 2.0, 0.0, 9.0};
  const PoolResult p = MaxPool1d(in, 2);
  ASSERT_EQ(p.out.rows, 3u);
  EXPECT_EQ(p.out.data, (std::vector<double>{4.0, 2.0, 9.0}));
  const Matrix d = MaxPool1dBackward(p, Matrix(3, 1, 1.0));
  EXPECT_EQ(d.data, (std::vector<double>{0.0, 1.0, 1.0, 0.0, 1.0}));
}

TEST(DropoutTest, InvertedScalingAndRate) {
  Rng rng(9);
  const Matrix mask = DropoutMask(100, 100, 0.5, rng);
  std::size_t zeros = 0;
  for (double v : mask.data) {
    ASSERT_TRUE(v == 0.0 || v == 2.0);
    zeros += v == 0.0;
  }
  EXPECT_NEAR(static_cast<double>(zeros) / 10000.0, 0.5, 0.03);
}

TEST(BceTest, SymmetricPoint) {
  EXPECT_NEAR(BinaryCrossEntropy(0.5, 0).loss, std::log(2.0), 1e-12);
  EXPECT_NEAR(BinaryCrossEntropy(0.5, 1).loss, std::log(2.0), 1e-12);
}

TEST(BceTest, GradientAtPointEightForPositive) {
  EXPECT_NEAR(BinaryCrossEntropy(0.8, 1).grad, -1.25, 1e-12);
}

TEST(BceTest, PerfectPredictionIsClampBounded) {
  const double bound = -std::log(1.0 - kProbabilityClamp);
  EXPECT_LE(BinaryCrossEntropy(1.0, 1).loss, bound + 1e-15);
  EXPECT_LE(BinaryCrossEntropy(0.0, 0).loss, bound + 1e-15);
  EXPECT_TRUE(std::isfinite(BinaryCrossEntropy(0.0, 1).loss));
}

TEST(AdamTest, ZeroGradientIsFixedPoint) {
  Vec w = {1.0, -2.0}, g = {0.0, 0.0};
  const std::vector<ParamRef> refs = {{"w", w, g}};
  AdamState adam;
  adam.Update(refs);
  EXPECT_EQ(w, (Vec{1.0, -2.0}));
  EXPECT_EQ(adam.step, 1u);
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  Vec w = {0.0}, g = {1.0};
  const std::vector<ParamRef> refs = {{"w", w, g}};
  AdamState adam;
  adam.Update(refs);
  EXPECT_NEAR(w[0], -adam.learning_rate, 1e-9);
}

TEST(AdamTest, MinimizesSquare) {
  Vec w = {1.0}, g = {0.0};
  const std::vector<ParamRef> refs = {{"w", w, g}};
  AdamState adam;
  adam.learning_rate = 0.01;
  double previous = w[0] * w[0];
  for (int step = 0; step < 100; ++step) {
    g[0] = 2.0 * w[0];
    adam.Update(refs);
    const double loss = w[0] * w[0];
    EXPECT_LT(loss, previous) << "step " << step;
    previous = loss;
  }
}

TEST(AdamTest, NonFiniteGradientNamesParameter) {
  Vec a = {1.0}, ga = {0.5}, b = {1.0}, gb = {std::nan("")};
  const std::vector<ParamRef> refs = {{"alpha", a, ga}, {"beta", b, gb}};
  AdamState adam;
  try {
    adam.Update(refs);
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
  }
  EXPECT_EQ(a[0], 1.0);
}

TEST(TrainConfigTest, RejectsOutOfRangeFields) {
  TrainConfig c;
  c.epochs = 0;
  EXPECT_THROW(c.Validate(), ContractError);
  c = TrainConfig{};
  c.dropout_rate = 1.0;
  EXPECT_THROW(c.Validate(), ContractError);
  EXPECT_NO_THROW(TrainConfig::DocClassifier(true).Validate());
  EXPECT_NO_THROW(TrainConfig::TokenClassifier(false).Validate());
}

TEST(TrainMinibatchesTest, DeterministicUnderSeed) {
  auto run = [] {
    Vec w = {0.3, -0.7}, g = {0.0, 0.0};
    const std::vector<ParamRef> refs = {{"w", w, g}};
    TrainConfig c;
    c.epochs = 3;
    c.batch_size = 2;
    c.learning_rate = 0.05;
    Rng rng(17);
    const std::vector<double> targets = {1.0, -1.0, 0.5, 2.0, 0.0};
    auto losses = TrainMinibatches(targets.size(), c, refs, rng, [&](std::size_t i) {
      const double e = w[0] + w[1] * static_cast<double>(i) - targets[i];
      g[0] += 2 * e;
      g[1] += 2 * e * static_cast<double>(i);
      return e * e;
    });
    losses.insert(losses.end(), w.begin(), w.end());
    return losses;
  };
  EXPECT_EQ(run(), run());
}

TEST(ShuffleTest, IsAPermutation) {
  Rng rng(5);
  std::vector<std::size_t> items(50);
  for (std::size_t i = 0; i < items.size(); ++i) items[i] = i;
  Shuffle(items, rng);
  auto sorted = items;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
}

}  // namespace
}  // namespace lexstyle::nn
