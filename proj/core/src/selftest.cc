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

#include "slid/selftest.h"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>

#include "slid/ctc/ctc.h"
#include "slid/model/acoustic_model.h"
#include "slid/model/language_classifier.h"
#include "slid/nn/gradient_check.h"
#include "slid/nn/layers.h"
#include "slid/nn/loss.h"

namespace slid {

bool SelfTestReport::passed() const {
  for (const auto& c : cases) {
    if (!c.passed) return false;
  }
  return !cases.empty();
}

std::string SelfTestReport::ToText() const {
  std::string out;
  for (const auto& c : cases) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s %s instances=%zu worst=%.3g%s%s\n",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.instances,
                  c.worst, c.detail.empty() ? "" : " ", c.detail.c_str());
    out += buf;
  }
  return out;
}

namespace {

nn::Tensor RandomTensor(const nn::Shape& shape, std::mt19937_64& rng,
                        double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  nn::Tensor t(shape);
  for (double& v : t.values()) v = n(rng);
  return t;
}

nn::Tensor RandomProbRows(std::size_t rows, std::size_t cols,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  nn::Tensor t({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) sum += t.at(r, c) = u(rng);
    for (std::size_t c = 0; c < cols; ++c) t.at(r, c) /= sum;
  }
  return t;
}

double Dot(const nn::Tensor& a, const nn::Tensor& b) {
  return std::inner_product(a.values().begin(), a.values().end(),
                            b.values().begin(), 0.0);
}

// Checks d(sum(r * f(x)))/d(x, params) for one layer instance.
double CheckModule(const std::function<nn::Tensor(const nn::Tensor&)>& forward,
                   const std::function<nn::Tensor(const nn::Tensor&)>& backward,
                   nn::Tensor x, const nn::ParameterList& params,
                   std::mt19937_64& rng, std::size_t max_checks) {
  const nn::Tensor y = forward(x);
  const nn::Tensor r = RandomTensor(y.shape(), rng);
  nn::ZeroGrads(params);
  const nn::Tensor dx = backward(r);
  std::vector<nn::Tensor> grads;
  for (const auto* p : params) grads.push_back(p->grad);
  auto loss = [&] { return Dot(r, forward(x)); };
  double worst = nn::CheckGradient(x.values(), dx.values(), loss, 1e-5,
                                   max_checks, &rng)
                     .max_relative_error;
  for (std::size_t i = 0; i < params.size(); ++i) {
    worst = std::max(worst, nn::CheckGradient(params[i]->value.values(),
                                              grads[i].values(), loss, 1e-5,
                                              max_checks, &rng)
                                .max_relative_error);
  }
  return worst;
}

int Uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Inputs spread apart so max-pool and ReLU stay away from their kinks.
nn::Tensor SpreadInput(const nn::Shape& shape, std::mt19937_64& rng) {
  nn::Tensor t(shape);
  std::vector<double> v(t.size());
  std::iota(v.begin(), v.end(), 0.0);
  std::shuffle(v.begin(), v.end(), rng);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  const double center = static_cast<double>(t.size()) / 2.0 + 0.5;
  for (std::size_t i = 0; i < v.size(); ++i) {
    t[i] = 0.1 * (v[i] - center) + jitter(rng);
  }
  return t;
}

SelfTestCase Summarize(const std::string& name, const std::vector<double>& errs,
                       double tolerance) {
  SelfTestCase c;
  c.name = name;
  c.instances = errs.size();
  for (double e : errs) c.worst = std::max(c.worst, e);
  c.passed = !errs.empty() && c.worst < tolerance;
  return c;
}

}  // namespace

SelfTestCase RunCtcOracleSweep(std::uint64_t seed, int max_frames,
                               int max_classes, int max_labels,
                               double tolerance) {
  std::mt19937_64 rng(seed);
  SelfTestCase c;
  c.name = "ctc_oracle_sweep";
  for (int classes = 2; classes <= max_classes; ++classes) {
    for (int frames = 1; frames <= max_frames; ++frames) {
      const nn::Tensor probs = RandomProbRows(
          static_cast<std::size_t>(frames), static_cast<std::size_t>(classes),
          rng);
      nn::Tensor log_probs = probs;
      for (double& v : log_probs.values()) v = std::log(v);
      for (int len = 0; len <= max_labels; ++len) {
        // Every sequence over the non-blank tokens 1..classes-1.
        const int base = classes - 1;
        int count = 1;
        for (int i = 0; i < len; ++i) count *= base;
        for (int code = 0; code < count; ++code) {
          std::vector<int> labels;
          for (int i = 0, k = code; i < len; ++i, k /= base) {
            labels.push_back(1 + k % base);
          }
          const double oracle = ctc::OracleCtcProbability(probs, labels, 0);
          const auto res = ctc::CtcLoss(log_probs, labels, 0);
          const double p = res.alignable ? std::exp(-res.loss) : 0.0;
          const double err = std::abs(p - oracle);
          c.worst = std::max(c.worst, err);
          ++c.instances;
          if (!res.alignable && oracle != 0.0) c.worst = 1.0;
        }
      }
    }
  }
  c.passed = c.instances > 0 && c.worst < tolerance;
  return c;
}

std::vector<SelfTestCase> RunGradientChecks(std::uint64_t seed, int instances,
                                            double tolerance) {
  std::mt19937_64 rng(seed);
  std::vector<SelfTestCase> out;
  const nn::RunMode eval{};

  {  // CTC gradient w.r.t. logits.
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      const int frames = Uniform(rng, 1, 6), classes = Uniform(rng, 2, 4);
      std::vector<int> labels;
      const int len = Uniform(rng, 0, std::min(3, frames));
      for (int k = 0; k < len; ++k) labels.push_back(Uniform(rng, 1, classes - 1));
      if (ctc::MinimumFrames(labels) > static_cast<std::size_t>(frames)) {
        labels.resize(1);
      }
      nn::Tensor logits = RandomTensor(
          {static_cast<std::size_t>(frames), static_cast<std::size_t>(classes)},
          rng);
      const auto g = ctc::CtcLossAndGradient(logits, labels, 0);
      auto loss = [&] { return ctc::CtcLossAndGradient(logits, labels, 0).loss; };
      errs.push_back(nn::CheckGradient(logits.values(), g.grad.values(), loss)
                         .max_relative_error);
    }
    out.push_back(Summarize("grad_ctc", errs, tolerance));
  }
  {
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      const int in = Uniform(rng, 1, 3), outc = Uniform(rng, 1, 3);
      const int k = 2 * Uniform(rng, 0, 1) + 1;
      nn::Conv2D conv("conv", in, outc, k, k, rng);
      nn::ParameterList params;
      conv.CollectParameters(params);
      const nn::Tensor x = RandomTensor(
          {static_cast<std::size_t>(in), static_cast<std::size_t>(Uniform(rng, 1, 5)),
           static_cast<std::size_t>(Uniform(rng, 1, 5))},
          rng);
      errs.push_back(CheckModule(
          [&](const nn::Tensor& v) { return conv.Forward(v, eval); },
          [&](const nn::Tensor& dy) { return conv.Backward(dy); }, x, params,
          rng, 0));
    }
    out.push_back(Summarize("grad_conv2d", errs, tolerance));
  }
  {
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      const int pt = Uniform(rng, 1, 2), pf = Uniform(rng, 1, 3);
      nn::MaxPool2D pool("pool", pt, pf);
      const nn::Tensor x = SpreadInput(
          {static_cast<std::size_t>(Uniform(rng, 1, 2)),
           static_cast<std::size_t>(pt * Uniform(rng, 1, 3)),
           static_cast<std::size_t>(pf * Uniform(rng, 1, 3))},
          rng);
      errs.push_back(CheckModule(
          [&](const nn::Tensor& v) { return pool.Forward(v, eval); },
          [&](const nn::Tensor& dy) { return pool.Backward(dy); }, x, {}, rng,
          0));
    }
    out.push_back(Summarize("grad_maxpool2d", errs, tolerance));
  }
  {
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      nn::ReLU relu;
      const nn::Tensor x = SpreadInput(
          {static_cast<std::size_t>(Uniform(rng, 1, 4)),
           static_cast<std::size_t>(Uniform(rng, 1, 5))},
          rng);
      errs.push_back(CheckModule(
          [&](const nn::Tensor& v) { return relu.Forward(v, eval); },
          [&](const nn::Tensor& dy) { return relu.Backward(dy); }, x, {}, rng,
          0));
    }
    out.push_back(Summarize("grad_relu", errs, tolerance));
  }
  {
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      nn::Softmax softmax;
      const nn::Tensor x = RandomTensor(
          {static_cast<std::size_t>(Uniform(rng, 1, 4)),
           static_cast<std::size_t>(Uniform(rng, 2, 5))},
          rng);
      errs.push_back(CheckModule(
          [&](const nn::Tensor& v) { return softmax.Forward(v, eval); },
          [&](const nn::Tensor& dy) { return softmax.Backward(dy); }, x, {},
          rng, 0));
    }
    out.push_back(Summarize("grad_softmax", errs, tolerance));
  }
  {
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      nn::Dropout dropout(0.3);
      const std::uint64_t mask_seed = rng();
      const nn::Tensor x = RandomTensor(
          {static_cast<std::size_t>(Uniform(rng, 1, 4)),
           static_cast<std::size_t>(Uniform(rng, 1, 5))},
          rng);
      errs.push_back(CheckModule(
          [&](const nn::Tensor& v) {
            std::mt19937_64 mask_rng(mask_seed);
            return dropout.Forward(v, nn::RunMode{true, &mask_rng});
          },
          [&](const nn::Tensor& dy) { return dropout.Backward(dy); }, x, {},
          rng, 0));
    }
    out.push_back(Summarize("grad_dropout", errs, tolerance));
  }
  {
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      const int in = Uniform(rng, 1, 5), o = Uniform(rng, 1, 5);
      nn::Dense dense("dense", in, o, rng);
      nn::ParameterList params;
      dense.CollectParameters(params);
      const bool vector_input = Uniform(rng, 0, 1) == 1;
      const nn::Tensor x =
          vector_input
              ? RandomTensor({static_cast<std::size_t>(in)}, rng)
              : RandomTensor({static_cast<std::size_t>(Uniform(rng, 1, 4)),
                              static_cast<std::size_t>(in)},
                             rng);
      errs.push_back(CheckModule(
          [&](const nn::Tensor& v) { return dense.Forward(v, eval); },
          [&](const nn::Tensor& dy) { return dense.Backward(dy); }, x, params,
          rng, 0));
    }
    out.push_back(Summarize("grad_dense", errs, tolerance));
  }
  {
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      const int in = Uniform(rng, 1, 4), h = Uniform(rng, 1, 4);
      const bool reverse = Uniform(rng, 0, 1) == 1;
      nn::Lstm lstm("lstm", in, h, reverse, 0.25, rng);
      nn::ParameterList params;
      lstm.CollectParameters(params);
      const std::uint64_t mask_seed = rng();
      const bool train = Uniform(rng, 0, 1) == 1;
      const nn::Tensor x = RandomTensor(
          {static_cast<std::size_t>(Uniform(rng, 1, 5)),
           static_cast<std::size_t>(in)},
          rng);
      errs.push_back(CheckModule(
          [&](const nn::Tensor& v) {
            std::mt19937_64 mask_rng(mask_seed);
            return lstm.Forward(v, nn::RunMode{train, &mask_rng});
          },
          [&](const nn::Tensor& dy) { return lstm.Backward(dy); }, x, params,
          rng, 0));
    }
    out.push_back(Summarize("grad_lstm", errs, tolerance));
  }
  {
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      const int in = Uniform(rng, 1, 4), h = Uniform(rng, 1, 3);
      const bool sequences = Uniform(rng, 0, 1) == 1;
      nn::BiLstm bilstm("bilstm", in, h, sequences, 0.0, rng);
      nn::ParameterList params;
      bilstm.CollectParameters(params);
      const nn::Tensor x = RandomTensor(
          {static_cast<std::size_t>(Uniform(rng, 1, 5)),
           static_cast<std::size_t>(in)},
          rng);
      errs.push_back(CheckModule(
          [&](const nn::Tensor& v) { return bilstm.Forward(v, eval); },
          [&](const nn::Tensor& dy) { return bilstm.Backward(dy); }, x, params,
          rng, 0));
    }
    out.push_back(Summarize("grad_bilstm", errs, tolerance));
  }
  {
    std::vector<double> errs;
    for (int i = 0; i < instances; ++i) {
      const std::size_t l = static_cast<std::size_t>(Uniform(rng, 2, 5));
      nn::Tensor logits = RandomTensor({l}, rng);
      std::vector<double> weights(l);
      std::uniform_real_distribution<double> u(0.5, 2.5);
      for (double& w : weights) w = u(rng);
      const int target = Uniform(rng, 0, static_cast<int>(l) - 1);
      const nn::Tensor p = nn::SoftmaxRows(logits);
      const auto x = nn::WeightedCrossEntropyWithGrad(p, target, weights);
      const nn::Tensor dlogits = nn::SoftmaxBackward(p, x.grad);
      auto loss = [&] {
        return nn::WeightedCrossEntropy(nn::SoftmaxRows(logits).values(),
                                        target, weights);
      };
      errs.push_back(nn::CheckGradient(logits.values(), dlogits.values(), loss)
                         .max_relative_error);
    }
    out.push_back(Summarize("grad_weighted_xent", errs, tolerance));
  }
  {  // Acoustic model + CTC, sampled parameters, looser bound.
    std::vector<double> errs;
    const int runs = std::max(1, instances / 5);
    for (int i = 0; i < runs; ++i) {
      model::AcousticConfig cfg;
      cfg.feature_groups = 3;
      cfg.feature_bins = 9;
      cfg.conv_filters = 2;
      cfg.lstm_layers = 2;
      cfg.lstm_hidden = 3;
      model::AcousticModel am(cfg, 4, rng());
      const nn::Tensor x = RandomTensor({8, 27}, rng);
      const std::vector<int> labels = {1, 2};
      auto params = am.Parameters();
      const std::uint64_t mask_seed = rng();
      auto run = [&] {
        std::mt19937_64 mask_rng(mask_seed);
        return am.Forward(x, nn::RunMode{true, &mask_rng});
      };
      nn::ZeroGrads(params);
      const auto out_fwd = run();
      const auto g = ctc::CtcLossAndGradient(out_fwd.logits, labels, 0);
      am.Backward(g.grad);
      std::vector<double*> values;
      std::vector<double> analytic;
      for (auto* p : params) {
        for (std::size_t k = 0; k < p->value.size(); ++k) {
          values.push_back(&p->value[k]);
          analytic.push_back(p->grad[k]);
        }
      }
      std::vector<std::size_t> order(values.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(std::min<std::size_t>(order.size(), 25));
      double worst = 0.0;
      for (std::size_t k : order) {
        const double saved = *values[k];
        *values[k] = saved + 1e-5;
        const double up = ctc::CtcLossAndGradient(run().logits, labels, 0).loss;
        *values[k] = saved - 1e-5;
        const double down =
            ctc::CtcLossAndGradient(run().logits, labels, 0).loss;
        *values[k] = saved;
        worst = std::max(worst, nn::RelativeError(analytic[k],
                                                  (up - down) / 2e-5));
      }
      errs.push_back(worst);
    }
    out.push_back(Summarize("grad_acoustic_model_ctc", errs, 1e-3));
  }
  return out;
}

SelfTestReport RunSelfTest(std::uint64_t seed) {
  SelfTestReport r;
  r.cases.push_back(RunCtcOracleSweep(seed));
  for (auto& c : RunGradientChecks(seed + 1)) r.cases.push_back(std::move(c));
  return r;
}

}  // namespace slid
