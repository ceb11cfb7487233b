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

#include "slid/model/linear_classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slid/error.h"

namespace slid::model {

std::vector<double> StatsPool(std::span<const nn::Tensor> parts) {
  std::size_t classes = 0;
  std::size_t frames = 0;
  for (const auto& p : parts) {
    if (p.rank() != 2) {
      throw Error(ErrorCode::kShapeMismatch, "stats_pool: expected rank-2 parts");
    }
    if (classes == 0) classes = p.cols();
    if (p.cols() != classes) {
      throw Error(ErrorCode::kShapeMismatch,
                  "stats_pool: parts disagree on the class count");
    }
    frames += p.rows();
  }
  if (frames == 0) {
    throw Error(ErrorCode::kNoVoicedFrames, "stats_pool: no retained frames");
  }
  std::vector<double> mean(classes, 0.0), var(classes, 0.0);
  for (const auto& p : parts) {
    for (std::size_t t = 0; t < p.rows(); ++t) {
      for (std::size_t c = 0; c < classes; ++c) mean[c] += p.at(t, c);
    }
  }
  for (double& m : mean) m /= static_cast<double>(frames);
  for (const auto& p : parts) {
    for (std::size_t t = 0; t < p.rows(); ++t) {
      for (std::size_t c = 0; c < classes; ++c) {
        const double d = p.at(t, c) - mean[c];
        var[c] += d * d;
      }
    }
  }
  for (double& v : var) v /= static_cast<double>(frames);
  mean.insert(mean.end(), var.begin(), var.end());
  return mean;
}

std::vector<double> LengthNormalize(std::vector<double> v) {
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(),
                                                   v.begin(), 0.0));
  if (norm > 0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

void LinearClassifierConfig::Validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kConfig, "linear_classifier: " + why);
  };
  if (!(l2 >= 0)) fail("l2 must be >= 0");
  if (!(learning_rate > 0)) fail("learning_rate must be > 0");
  if (iterations < 1) fail("iterations must be >= 1");
}

LinearClassifier LinearClassifier::Train(
    const std::vector<std::vector<double>>& inputs,
    const std::vector<int>& labels, std::span<const double> class_weights,
    int num_classes, const LinearClassifierConfig& config) {
  config.Validate();
  if (inputs.size() != labels.size() || inputs.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "linear_classifier: inputs and labels must be non-empty and "
                "of equal length");
  }
  if (num_classes < 2) {
    throw Error(ErrorCode::kDegenerate,
                "linear_classifier: training needs at least two classes");
  }
  if (class_weights.size() != static_cast<std::size_t>(num_classes)) {
    throw Error(ErrorCode::kInvalidArgument,
                "linear_classifier: one weight per class required");
  }
  const std::size_t dim = inputs.front().size();
  std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != dim) {
      throw Error(ErrorCode::kShapeMismatch,
                  "linear_classifier: inconsistent input dimensions");
    }
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument,
                  "linear_classifier: label out of range");
    }
    ++counts[static_cast<std::size_t>(labels[i])];
  }
  for (int c = 0; c < num_classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw Error(ErrorCode::kDegenerate,
                  "linear_classifier: class " + std::to_string(c) +
                      " has no training samples");
    }
  }

  // Canonical sample order makes the summed subgradient independent of the
  // order the caller supplied.
  std::vector<std::vector<double>> x;
  x.reserve(inputs.size());
  for (const auto& in : inputs) {
    x.push_back(config.length_normalize ? LengthNormalize(in) : in);
  }
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    return x[a] < x[b];
  });

  const auto n = static_cast<double>(x.size());
  LinearClassifier clf;
  clf.length_normalize_ = config.length_normalize;
  clf.weights_ = nn::Tensor({static_cast<std::size_t>(num_classes), dim});
  clf.bias_ = nn::Tensor({static_cast<std::size_t>(num_classes)});
  std::vector<double> gw(dim);
  for (int c = 0; c < num_classes; ++c) {
    auto w = clf.weights_.row(static_cast<std::size_t>(c));
    double& b = clf.bias_[static_cast<std::size_t>(c)];
    for (int it = 0; it < config.iterations; ++it) {
      std::fill(gw.begin(), gw.end(), 0.0);
      double gb = 0.0;
      for (std::size_t i : order) {
        const double y = labels[i] == c ? 1.0 : -1.0;
        const double margin =
            std::inner_product(w.begin(), w.end(), x[i].begin(), b);
        if (y * margin < 1.0) {
          const double scale =
              class_weights[static_cast<std::size_t>(labels[i])] * y / n;
          for (std::size_t d = 0; d < dim; ++d) gw[d] -= scale * x[i][d];
          gb -= scale;
        }
      }
      const double lr = config.learning_rate / std::sqrt(1.0 + it);
      for (std::size_t d = 0; d < dim; ++d) {
        w[d] -= lr * (gw[d] + config.l2 * w[d]);
      }
      b -= lr * gb;
    }
  }
  return clf;
}

std::vector<double> LinearClassifier::Margins(
    std::span<const double> input) const {
  if (input.size() != dim()) {
    throw Error(ErrorCode::kShapeMismatch,
                "linear_classifier: expected input of dimension " +
                    std::to_string(dim()));
  }
  std::vector<double> x(input.begin(), input.end());
  if (length_normalize_) x = LengthNormalize(std::move(x));
  std::vector<double> margins(static_cast<std::size_t>(num_classes()));
  for (std::size_t c = 0; c < margins.size(); ++c) {
    auto w = weights_.row(c);
    margins[c] = std::inner_product(w.begin(), w.end(), x.begin(), bias_[c]);
  }
  return margins;
}

std::vector<double> LinearClassifier::Predict(
    std::span<const double> input) const {
  std::vector<double> m = Margins(input);
  const double top = *std::max_element(m.begin(), m.end());
  double sum = 0.0;
  for (double& v : m) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : m) v /= sum;
  return m;
}

LinearClassifier LinearClassifier::FromParameters(nn::Tensor weights,
                                                  nn::Tensor bias,
                                                  bool length_normalize) {
  if (weights.rank() != 2 || bias.rank() != 1 ||
      bias.size() != weights.rows()) {
    throw Error(ErrorCode::kShapeMismatch,
                "linear_classifier: inconsistent parameter shapes");
  }
  LinearClassifier clf;
  clf.weights_ = std::move(weights);
  clf.bias_ = std::move(bias);
  clf.length_normalize_ = length_normalize;
  return clf;
}

}  // namespace slid::model
