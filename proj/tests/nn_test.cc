// Copyright 2026 The SLID Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "slid/error.h"
#include "slid/nn/adam.h"
#include "slid/nn/checkpoint.h"
#include "slid/nn/layers.h"
#include "slid/nn/loss.h"
#include "slid/nn/tensor.h"
#include "test_util.h"

namespace slid::nn {
namespace {

constexpr double kStep = 1e-5;
constexpr double kTolerance = 1e-4;

Tensor RandomTensor(Shape shape, std::mt19937_64& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> u(-scale, scale);
  for (double& v : t.values()) v = u(rng);
  return t;
}

double Dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Central-difference check of `analytic` against `loss` perturbing `values`.
// Relative error |a - n| / max(|a|, |n|, 1e-6).
double MaxRelativeError(std::span<double> values,
                        std::span<const double> analytic,
                        const std::function<double()>& loss) {
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double saved = values[i];
    values[i] = saved + kStep;
    const double up = loss();
    values[i] = saved - kStep;
    const double down = loss();
    values[i] = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    const double denom =
        std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

// Checks input and parameter gradients of a layer under loss = <y, r>.
template <typename Layer>
void CheckLayer(Layer& layer, Tensor x, ParameterList params,
                std::uint64_t mask_seed, bool train) {
  std::mt19937_64 mask_rng;
  auto run = [&](const Tensor& input) {
    mask_rng.seed(mask_seed);
    return layer.Forward(input, RunMode{train, &mask_rng});
  };
  std::mt19937_64 rng(mask_seed + 1);
  const Tensor y0 = run(x);
  const Tensor r = RandomTensor(y0.shape(), rng);
  ZeroGrads(params);
  run(x);
  const Tensor dx = layer.Backward(r);
  ASSERT_EQ(dx.shape(), x.shape());
  const auto loss = [&] { return Dot(run(x), r); };
  EXPECT_LT(MaxRelativeError(x.values(), dx.values(), loss), kTolerance)
      << "input gradient";
  for (Parameter* p : params) {
    const Tensor analytic = p->grad;
    EXPECT_LT(MaxRelativeError(p->value.values(), analytic.values(), loss),
              kTolerance)
        << p->name;
  }
}

// ----------------------------------------------------------------- forward

TEST(Conv2DTest, IdentityCentreKernelIsIdentity) {
  std::mt19937_64 rng(1);
  Conv2D conv("conv", 2, 2, 3, 3, rng);
  ParameterList params;
  conv.CollectParameters(params);
  Tensor& kernel = params[0]->value;
  kernel.Fill(0.0);
  // kernel[co, ci, 1, 1] = (co == ci)
  for (int c = 0; c < 2; ++c) kernel[((c * 2 + c) * 3 + 1) * 3 + 1] = 1.0;
  params[1]->value.Fill(0.0);
  const Tensor x = RandomTensor({2, 5, 7}, rng);
  EXPECT_EQ(conv.Forward(x, {}), x);
}

TEST(MaxPool2DTest, RampGivesBlockMaxima) {
  // 4x6 ramp: value = 6 t + f.
  Tensor x({1, 4, 6});
  for (int i = 0; i < 24; ++i) x[i] = i;
  MaxPool2D pool("pool", 2, 3);
  const Tensor y = pool.Forward(x, {});
  EXPECT_EQ(y.shape(), (Shape{1, 2, 2}));
  EXPECT_EQ(std::vector<double>(y.values().begin(), y.values().end()),
            (std::vector<double>{8, 11, 20, 23}));
}

TEST(MaxPool2DTest, TrailingCellsAreDropped) {
  MaxPool2D pool("pool", 2, 3);
  EXPECT_EQ(pool.Forward(Tensor({3, 5, 41}), {}).shape(), (Shape{3, 2, 13}));
}

TEST(BiLstmTest, ZeroWeightsGiveZeroOutputs) {
  std::mt19937_64 rng(2);
  BiLstm lstm("bilstm", 3, 4, true, 0.0, rng);
  ParameterList params;
  lstm.CollectParameters(params);
  for (Parameter* p : params) p->value.Fill(0.0);
  const Tensor y = lstm.Forward(RandomTensor({6, 3}, rng), {});
  EXPECT_EQ(y.shape(), (Shape{6, 8}));
  for (double v : y.values()) EXPECT_EQ(v, 0.0);
}

TEST(BiLstmTest, FinalStateMode) {
  std::mt19937_64 rng(3);
  BiLstm seq("a", 3, 4, true, 0.0, rng);
  std::mt19937_64 rng2(3);
  BiLstm last("a", 3, 4, false, 0.0, rng2);
  const Tensor x = RandomTensor({5, 3}, rng);
  const Tensor ys = seq.Forward(x, {});
  const Tensor yl = last.Forward(x, {});
  ASSERT_EQ(yl.shape(), (Shape{8}));
  for (int h = 0; h < 4; ++h) {
    EXPECT_DOUBLE_EQ(yl[h], ys.at(4, h));          // last forward state
    EXPECT_DOUBLE_EQ(yl[4 + h], ys.at(0, 4 + h));  // first backward state
  }
}

TEST(SoftmaxTest, RowsSumToOne) {
  std::mt19937_64 rng(4);
  const Tensor p = SoftmaxRows(RandomTensor({9, 7}, rng, 50.0));
  for (std::size_t r = 0; r < p.rows(); ++r) {
    double sum = 0.0;
    for (double v : p.row(r)) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(DropoutTest, EvalModeIsPassThrough) {
  std::mt19937_64 rng(5);
  Dropout dropout(0.5);
  const Tensor x = RandomTensor({4, 3}, rng);
  EXPECT_EQ(dropout.Forward(x, {}), x);
  const Tensor dy = RandomTensor({4, 3}, rng);
  EXPECT_EQ(dropout.Backward(dy), dy);
}

TEST(DropoutTest, TrainModeUsesInvertedScaling) {
  std::mt19937_64 rng(6);
  Dropout dropout(0.25);
  const Tensor x({20000}, 1.0);
  const Tensor y = dropout.Forward(x, {true, &rng});
  double mean = 0.0;
  for (double v : y.values()) {
    EXPECT_TRUE(v == 0.0 || std::abs(v - 1.0 / 0.75) < 1e-12);
    mean += v;
  }
  EXPECT_NEAR(mean / 20000, 1.0, 0.03);
}

TEST(DenseTest, InputGradientIsWeightTransposeTimesDy) {
  std::mt19937_64 rng(7);
  Dense dense("dense", 4, 3, rng);
  ParameterList params;
  dense.CollectParameters(params);
  const Tensor& w = params[0]->value;  // [out, in]
  const Tensor x = RandomTensor({2, 4}, rng);
  dense.Forward(x, {});
  const Tensor dy = RandomTensor({2, 3}, rng);
  const Tensor dx = dense.Backward(dy);
  for (int t = 0; t < 2; ++t) {
    for (int i = 0; i < 4; ++i) {
      double expected = 0.0;
      for (int o = 0; o < 3; ++o) expected += w.at(o, i) * dy.at(t, o);
      EXPECT_NEAR(dx.at(t, i), expected, 1e-12);
    }
  }
}

TEST(LayerErrorsTest, BackwardBeforeForwardThrows) {
  std::mt19937_64 rng(8);
  Dense dense("dense", 2, 2, rng);
  try {
    dense.Backward(Tensor({1, 2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kState);
  }
  Conv2D conv("conv", 1, 1, 3, 3, rng);
  EXPECT_THROW(conv.Backward(Tensor({1, 2, 2})), Error);
  BiLstm lstm("lstm", 2, 2, true, 0.0, rng);
  EXPECT_THROW(lstm.Backward(Tensor({1, 4})), Error);
  ReLU relu;
  EXPECT_THROW(relu.Backward(Tensor({1})), Error);
  MaxPool2D pool("pool", 2, 2);
  EXPECT_THROW(pool.Backward(Tensor({1, 1, 1})), Error);
}

TEST(LayerErrorsTest, ShapeMismatchNamesLayerAndShapes) {
  std::mt19937_64 rng(9);
  Dense dense("am/output", 4, 3, rng);
  try {
    dense.Forward(Tensor({2, 5}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("am/output"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[2x5]"), std::string::npos) << msg;
  }
  Conv2D conv("am/conv1", 3, 4, 3, 3, rng);
  try {
    conv.Forward(Tensor({2, 5, 5}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("am/conv1"), std::string::npos);
  }
}

// --------------------------------------------------------------- gradients

class LayerGradientTest : public ::testing::TestWithParam<int> {};

TEST_P(LayerGradientTest, Conv2D) {
  std::mt19937_64 rng(100 + GetParam());
  Conv2D conv("conv", 2, 3, 3, 3, rng);
  ParameterList params;
  conv.CollectParameters(params);
  CheckLayer(conv, RandomTensor({2, 4, 5}, rng), params, GetParam(), false);
}

TEST_P(LayerGradientTest, MaxPool2D) {
  std::mt19937_64 rng(200 + GetParam());
  MaxPool2D pool("pool", 2, 3);
  CheckLayer(pool, RandomTensor({2, 5, 7}, rng), {}, GetParam(), false);
}

TEST_P(LayerGradientTest, ReLU) {
  std::mt19937_64 rng(300 + GetParam());
  ReLU relu;
  // Inputs kept off the kink at 0.
  Tensor x = RandomTensor({4, 6}, rng);
  for (double& v : x.values()) v += v >= 0 ? 1e-3 : -1e-3;
  CheckLayer(relu, x, {}, GetParam(), false);
}

TEST_P(LayerGradientTest, Softmax) {
  std::mt19937_64 rng(400 + GetParam());
  Softmax softmax;
  CheckLayer(softmax, RandomTensor({3, 5}, rng, 3.0), {}, GetParam(), false);
}

TEST_P(LayerGradientTest, DropoutTrainMode) {
  std::mt19937_64 rng(500 + GetParam());
  Dropout dropout(0.3);
  CheckLayer(dropout, RandomTensor({4, 5}, rng), {}, GetParam(), true);
}

TEST_P(LayerGradientTest, Dense) {
  std::mt19937_64 rng(600 + GetParam());
  Dense dense("dense", 5, 4, rng);
  ParameterList params;
  dense.CollectParameters(params);
  CheckLayer(dense, RandomTensor({3, 5}, rng), params, GetParam(), false);
}

TEST_P(LayerGradientTest, LstmWithRecurrentDropout) {
  std::mt19937_64 rng(700 + GetParam());
  Lstm lstm("lstm", 3, 4, GetParam() % 2 == 1, 0.2, rng);
  ParameterList params;
  lstm.CollectParameters(params);
  CheckLayer(lstm, RandomTensor({5, 3}, rng), params, GetParam(), true);
}

TEST_P(LayerGradientTest, BiLstmSequences) {
  std::mt19937_64 rng(800 + GetParam());
  BiLstm lstm("bilstm", 3, 3, true, 0.1, rng);
  ParameterList params;
  lstm.CollectParameters(params);
  CheckLayer(lstm, RandomTensor({4, 3}, rng), params, GetParam(), true);
}

TEST_P(LayerGradientTest, BiLstmFinalState) {
  std::mt19937_64 rng(900 + GetParam());
  BiLstm lstm("bilstm", 3, 3, false, 0.0, rng);
  ParameterList params;
  lstm.CollectParameters(params);
  CheckLayer(lstm, RandomTensor({4, 3}, rng), params, GetParam(), false);
}

TEST_P(LayerGradientTest, WeightedCrossEntropy) {
  std::mt19937_64 rng(1000 + GetParam());
  Tensor logits = RandomTensor({4}, rng, 2.0);
  const std::vector<double> weights = {0.5, 1.0, 2.0, 1.5};
  const int target = GetParam() % 4;
  auto loss = [&] {
    return WeightedCrossEntropy(SoftmaxRows(logits).values(), target, weights);
  };
  const Tensor probs = SoftmaxRows(logits);
  const LossAndGrad lg = WeightedCrossEntropyWithGrad(probs, target, weights);
  EXPECT_NEAR(lg.loss, loss(), 1e-15);
  const Tensor dlogits = SoftmaxBackward(probs, lg.grad);
  EXPECT_LT(MaxRelativeError(logits.values(), dlogits.values(), loss),
            kTolerance);
}

INSTANTIATE_TEST_SUITE_P(Seeds, LayerGradientTest, ::testing::Range(0, 10));

// ------------------------------------------------------------ weighted xent

TEST(WeightedCrossEntropyTest, KnownValues) {
  const std::vector<double> w1 = {1.0, 1.0};
  const std::vector<double> w25 = {1.0, 2.5};
  EXPECT_NEAR(WeightedCrossEntropy(std::vector<double>{0.0, 1.0}, 1, w25), 0.0,
              1e-9);
  EXPECT_NEAR(WeightedCrossEntropy(std::vector<double>{0.5, 0.5}, 1, w1),
              0.6931, 1e-4);
  EXPECT_NEAR(WeightedCrossEntropy(std::vector<double>{0.5, 0.5}, 1, w25),
              1.7329, 1e-4);
}

TEST(WeightedCrossEntropyTest, InvalidTargetThrows) {
  const std::vector<double> w = {1.0, 1.0};
  EXPECT_THROW(WeightedCrossEntropy(std::vector<double>{0.5, 0.5}, 2, w), Error);
  EXPECT_THROW(WeightedCrossEntropy(std::vector<double>{0.5, 0.5}, -1, w),
               Error);
}

// -------------------------------------------------------------------- adam

TEST(AdamTest, ZeroGradientLeavesParametersAndCountsStep) {
  Parameter p("p", Tensor({3}, 0.7));
  Adam adam;
  adam.Step({&p});
  EXPECT_EQ(adam.state().step, 1);
  for (double v : p.value.values()) EXPECT_EQ(v, 0.7);
}

TEST(AdamTest, FirstStepMovesByLearningRateTimesSign) {
  // m_hat = g and v_hat = g^2 after one step, so the update is
  // lr * g / (|g| + eps).
  Parameter p("p", Tensor({2}, 1.0));
  p.grad[0] = 1.0;
  p.grad[1] = -3.0;
  Adam adam(AdamConfig{1e-3, 0.9, 0.999, 1e-8});
  adam.Step({&p});
  EXPECT_NEAR(p.value[0], 1.0 - 1e-3 * 1.0 / (1.0 + 1e-8), 1e-15);
  EXPECT_NEAR(p.value[0], 0.999, 1e-10);
  EXPECT_NEAR(p.value[1], 1.0 + 1e-3 * 3.0 / (3.0 + 1e-8), 1e-15);
}

TEST(AdamTest, IdenticalStateGivesIdenticalResults) {
  std::mt19937_64 rng(11);
  Parameter a("a", RandomTensor({5}, rng));
  a.grad = RandomTensor({5}, rng);
  Adam adam;
  adam.Step({&a});
  Parameter b = a;
  Adam copy = adam;
  adam.Step({&a});
  copy.Step({&b});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(adam.state().step, 2);
}

// -------------------------------------------------------------- checkpoint

TEST(CheckpointTest, RoundTripsTensorsAndMetadata) {
  const auto dir = ::slid::testing::MakeTempDir("ckpt");
  std::mt19937_64 rng(12);
  Checkpoint ckpt;
  ckpt.kind = "acoustic";
  ckpt.config_json = R"({"a":1})";
  ckpt.fingerprint = Fingerprint(ckpt.config_json);
  ckpt.charset = {"\xCE\xB5", " ", "I", "a", "ʃ"};
  Tensor t = RandomTensor({2, 3}, rng);
  ckpt.tensors.emplace_back("layer/weight", t);
  ckpt.tensors.emplace_back("layer/bias", RandomTensor({3}, rng));
  WriteCheckpoint(dir / "x.ckpt", ckpt);
  const Checkpoint back = ReadCheckpoint(dir / "x.ckpt");
  EXPECT_EQ(back.kind, ckpt.kind);
  EXPECT_EQ(back.config_json, ckpt.config_json);
  EXPECT_EQ(back.fingerprint, ckpt.fingerprint);
  EXPECT_EQ(back.charset, ckpt.charset);
  ASSERT_EQ(back.tensors.size(), 2u);
  EXPECT_EQ(back.tensors[0].first, "layer/weight");
  EXPECT_EQ(back.tensors[0].second.shape(), t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(back.tensors[0].second[i], static_cast<float>(t[i]));
  }
}

TEST(CheckpointTest, ImportRejectsWrongShape) {
  std::mt19937_64 rng(13);
  Dense dense("d", 2, 2, rng);
  ParameterList params;
  dense.CollectParameters(params);
  auto exported = ExportParameters(params);
  exported[0].second = Tensor({3, 2});
  EXPECT_THROW(ImportParameters(exported, params), Error);
}

TEST(CheckpointTest, FingerprintDependsOnText) {
  EXPECT_EQ(Fingerprint("abc"), Fingerprint("abc"));
  EXPECT_NE(Fingerprint("abc"), Fingerprint("abd"));
}

}  // namespace
}  // namespace slid::nn
