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

#ifndef SLID_MODEL_ACOUSTIC_MODEL_H_
#define SLID_MODEL_ACOUSTIC_MODEL_H_

#include <cstdint>
#include <vector>

#include "slid/features/features.h"
#include "slid/nn/layers.h"
#include "slid/nn/tensor.h"

namespace slid::model {

// CRNN hyperparameters. Defaults are the full-size architecture; tests and
// the synthetic corpus use a scaled-down copy.
struct AcousticConfig {
  int feature_groups = 3;  // static | delta | delta-delta, used as channels
  int feature_bins = 41;   // 40 mel bands + energy
  int conv_blocks = 2;
  int conv_filters = 32;
  int kernel_size = 3;
  int pool_time = 2;
  int pool_freq = 3;
  int lstm_layers = 3;
  int lstm_hidden = 256;
  double dropout = 0.1;
  double recurrent_dropout = 0.1;

  void Validate() const;
  // Frequency bins left after the pooling stack.
  int pooled_bins() const;
  // Per-frame width of the first recurrent layer's input.
  int lstm_input() const { return conv_filters * pooled_bins(); }
  bool operator==(const AcousticConfig&) const = default;
};

// Converts [N, groups * bins] features into the [groups, N, bins] conv input.
nn::Tensor FeaturesToConvInput(const nn::Tensor& features, int groups, int bins);
nn::Tensor FeatureMatrixToTensor(const features::FeatureMatrix& features);

// Features -> per-frame token logits and posteriorgram: conv blocks
// (conv, ReLU, max-pool), stacked BiLSTMs with dropout in between, and a
// time-distributed dense layer followed by a softmax.
class AcousticModel {
 public:
  AcousticModel() = default;
  // Throws Error(kConfig) for an invalid config or fewer than two tokens.
  AcousticModel(const AcousticConfig& config, std::size_t num_tokens,
                std::uint64_t seed);

  struct Output {
    nn::Tensor logits;  // [N', C]
    nn::Tensor probs;   // [N', C], rows sum to 1
  };

  // features: [N, groups * bins]. Throws Error(kShapeMismatch) when N is
  // smaller than the total time pooling factor.
  Output Forward(const nn::Tensor& features, const nn::RunMode& mode);
  // Gradient of the loss w.r.t. the logits -> gradient w.r.t. the features.
  nn::Tensor Backward(const nn::Tensor& dlogits);

  nn::ParameterList Parameters();
  std::size_t OutputFrames(std::size_t input_frames) const;

  const AcousticConfig& config() const { return config_; }
  std::size_t num_tokens() const { return num_tokens_; }

 private:
  AcousticConfig config_;
  std::size_t num_tokens_ = 0;
  std::vector<nn::Conv2D> convs_;
  std::vector<nn::ReLU> relus_;
  std::vector<nn::MaxPool2D> pools_;
  std::vector<nn::BiLstm> lstms_;
  std::vector<nn::Dropout> dropouts_;
  nn::Dense output_;
  std::vector<std::size_t> conv_out_shape_;
};

}  // namespace slid::model

#endif  // SLID_MODEL_ACOUSTIC_MODEL_H_
