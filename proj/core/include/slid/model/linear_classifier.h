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

#ifndef SLID_MODEL_LINEAR_CLASSIFIER_H_
#define SLID_MODEL_LINEAR_CLASSIFIER_H_

#include <span>
#include <vector>

#include "slid/nn/tensor.h"

namespace slid::model {

// Per-class mean followed by per-class population variance over every row of
// every part, i.e. a 2C vector. Throws Error(kNoVoicedFrames) when the parts
// hold no rows at all.
std::vector<double> StatsPool(std::span<const nn::Tensor> parts);

// Scales `v` to unit Euclidean norm (a zero vector is returned unchanged).
std::vector<double> LengthNormalize(std::vector<double> v);

struct LinearClassifierConfig {
  double l2 = 1e-3;
  double learning_rate = 0.5;
  int iterations = 3000;
  bool length_normalize = true;

  void Validate() const;
  bool operator==(const LinearClassifierConfig&) const = default;
};

// One-vs-rest linear max-margin classifier trained by full-batch subgradient
// descent on the class-weighted hinge loss with an L2 penalty.
class LinearClassifier {
 public:
  LinearClassifier() = default;

  // Throws Error(kDegenerate) unless every class in [0, num_classes) has at
  // least one sample and there are at least two classes.
  static LinearClassifier Train(const std::vector<std::vector<double>>& inputs,
                                const std::vector<int>& labels,
                                std::span<const double> class_weights,
                                int num_classes,
                                const LinearClassifierConfig& config);

  std::vector<double> Margins(std::span<const double> input) const;
  // Softmax of the margins.
  std::vector<double> Predict(std::span<const double> input) const;

  int num_classes() const { return static_cast<int>(weights_.rows()); }
  std::size_t dim() const { return weights_.cols(); }
  bool length_normalize() const { return length_normalize_; }

  // weights [L, D] and bias [L] for checkpointing.
  const nn::Tensor& weights() const { return weights_; }
  const nn::Tensor& bias() const { return bias_; }
  static LinearClassifier FromParameters(nn::Tensor weights, nn::Tensor bias,
                                         bool length_normalize);

 private:
  nn::Tensor weights_;
  nn::Tensor bias_;
  bool length_normalize_ = true;
};

}  // namespace slid::model

#endif  // SLID_MODEL_LINEAR_CLASSIFIER_H_
