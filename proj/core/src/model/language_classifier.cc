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

#include "slid/model/language_classifier.h"

#include <random>
#include <string>

#include "slid/error.h"

namespace slid::model {

void ClassifierConfig::Validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kConfig, "classifier: " + why);
  };
  if (lstm_layers < 1) fail("lstm_layers must be >= 1");
  if (lstm_hidden < 1) fail("lstm_hidden must be >= 1");
  if (!(dropout >= 0 && dropout < 1)) fail("dropout must be in [0, 1)");
  if (!(recurrent_dropout >= 0 && recurrent_dropout < 1)) {
    fail("recurrent_dropout must be in [0, 1)");
  }
}

nn::Tensor CleanPosteriorgram(const nn::Tensor& posteriorgram,
                              double threshold, int blank,
                              std::vector<std::size_t>* kept) {
  const std::size_t rows = posteriorgram.rank() == 2 ? posteriorgram.rows() : 0;
  const std::size_t cols = posteriorgram.rank() == 2 ? posteriorgram.cols() : 0;
  if (blank < 0 || static_cast<std::size_t>(blank) >= cols) {
    throw Error(ErrorCode::kInvalidArgument,
                "clean_posteriorgram: blank id out of range");
  }
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < rows; ++t) {
    if (!(posteriorgram.at(t, static_cast<std::size_t>(blank)) > threshold)) {
      keep.push_back(t);
    }
  }
  nn::Tensor out = keep.empty() ? nn::Tensor({0, cols})
                                : posteriorgram.GatherRows(keep);
  if (kept != nullptr) *kept = std::move(keep);
  return out;
}

LanguageClassifier::LanguageClassifier(const ClassifierConfig& config,
                                       std::size_t num_tokens,
                                       std::size_t num_languages,
                                       std::uint64_t seed)
    : config_(config), num_tokens_(num_tokens), num_languages_(num_languages) {
  config_.Validate();
  if (num_tokens_ < 2) {
    throw Error(ErrorCode::kConfig, "classifier: charset needs at least 2 tokens");
  }
  if (num_languages_ < 2) {
    throw Error(ErrorCode::kConfig, "classifier: needs at least 2 languages");
  }
  std::mt19937_64 rng(seed);
  int in = static_cast<int>(num_tokens_);
  for (int l = 0; l < config_.lstm_layers; ++l) {
    const bool last = l + 1 == config_.lstm_layers;
    lstms_.emplace_back("lid/blstm" + std::to_string(l + 1), in,
                        config_.lstm_hidden, !last, config_.recurrent_dropout,
                        rng);
    dropouts_.emplace_back(config_.dropout);
    in = 2 * config_.lstm_hidden;
  }
  output_ = nn::Dense("lid/output", in, static_cast<int>(num_languages_), rng);
}

nn::ParameterList LanguageClassifier::Parameters() {
  nn::ParameterList params;
  for (auto& l : lstms_) l.CollectParameters(params);
  output_.CollectParameters(params);
  return params;
}

nn::Tensor LanguageClassifier::Forward(const nn::Tensor& posteriorgram,
                                       const nn::RunMode& mode) {
  if (posteriorgram.rank() != 2 || posteriorgram.cols() != num_tokens_) {
    throw Error(ErrorCode::kShapeMismatch,
                "lid_forward: expected [T x " + std::to_string(num_tokens_) +
                    "] posteriorgram, got " +
                    nn::ShapeString(posteriorgram.shape()));
  }
  if (posteriorgram.rows() == 0) {
    throw Error(ErrorCode::kNoVoicedFrames, "lid_forward: no voiced frames");
  }
  nn::Tensor x = posteriorgram;
  for (std::size_t l = 0; l < lstms_.size(); ++l) {
    x = lstms_[l].Forward(x, mode);
    x = dropouts_[l].Forward(x, mode);
  }
  probs_ = nn::SoftmaxRows(output_.Forward(x, mode));
  return probs_;
}

nn::Tensor LanguageClassifier::Backward(const nn::Tensor& dprobs) {
  if (probs_.empty()) {
    throw Error(ErrorCode::kState, "lid_backward: no cached forward pass");
  }
  nn::Tensor g = output_.Backward(nn::SoftmaxBackward(probs_, dprobs));
  for (std::size_t l = lstms_.size(); l-- > 0;) {
    g = dropouts_[l].Backward(g);
    g = lstms_[l].Backward(g);
  }
  return g;
}

}  // namespace slid::model
