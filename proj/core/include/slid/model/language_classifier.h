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

#ifndef SLID_MODEL_LANGUAGE_CLASSIFIER_H_
#define SLID_MODEL_LANGUAGE_CLASSIFIER_H_

#include <cstdint>
#include <vector>

#include "slid/nn/layers.h"
#include "slid/nn/tensor.h"

namespace slid::model {

inline constexpr double kDefaultBlankThreshold = 0.95;

struct ClassifierConfig {
  int lstm_layers = 2;
  int lstm_hidden = 64;
  double dropout = 0.2;
  double recurrent_dropout = 0.1;

  void Validate() const;
  bool operator==(const ClassifierConfig&) const = default;
};

// Rows of `posteriorgram` whose blank probability is <= `threshold`, in
// order. Indices of the kept rows are written to `kept` when non-null. An
// all-blank input yields an empty [0, C] tensor.
nn::Tensor CleanPosteriorgram(const nn::Tensor& posteriorgram,
                              double threshold = kDefaultBlankThreshold,
                              int blank = 0,
                              std::vector<std::size_t>* kept = nullptr);

// Recurrent classifier over a cleaned posteriorgram: BiLSTM layers (the last
// one emits its final states only) with dropout after each, then a dense
// softmax over the languages.
class LanguageClassifier {
 public:
  LanguageClassifier() = default;
  LanguageClassifier(const ClassifierConfig& config, std::size_t num_tokens,
                     std::size_t num_languages, std::uint64_t seed);

  // [T, C] -> [L] probabilities. Throws Error(kNoVoicedFrames) for T = 0.
  nn::Tensor Forward(const nn::Tensor& posteriorgram, const nn::RunMode& mode);
  // Gradient w.r.t. the output probabilities -> gradient w.r.t. the input.
  nn::Tensor Backward(const nn::Tensor& dprobs);

  nn::ParameterList Parameters();

  const ClassifierConfig& config() const { return config_; }
  std::size_t num_tokens() const { return num_tokens_; }
  std::size_t num_languages() const { return num_languages_; }

 private:
  ClassifierConfig config_;
  std::size_t num_tokens_ = 0;
  std::size_t num_languages_ = 0;
  std::vector<nn::BiLstm> lstms_;
  std::vector<nn::Dropout> dropouts_;
  nn::Dense output_;
  nn::Tensor probs_;
};

}  // namespace slid::model

#endif  // SLID_MODEL_LANGUAGE_CLASSIFIER_H_
