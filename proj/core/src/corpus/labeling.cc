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

#include "slid/corpus/labeling.h"

#include <set>

#include "slid/error.h"

namespace slid::corpus {

void LabelingConfig::Validate() const {
  if (min_words < 0) {
    throw Error(ErrorCode::kConfig, "labeling: min_words must be >= 0");
  }
  if (!(repetition_threshold >= 0 && repetition_threshold <= 1)) {
    throw Error(ErrorCode::kConfig,
                "labeling: repetition_threshold must be in [0, 1]");
  }
  if (!(confidence_threshold >= 0 && confidence_threshold <= 1)) {
    throw Error(ErrorCode::kConfig,
                "labeling: confidence_threshold must be in [0, 1]");
  }
}

double DistinctWordRatio(std::span<const std::string> words) {
  if (words.empty()) return 1.0;
  const std::set<std::string> distinct(words.begin(), words.end());
  return static_cast<double>(distinct.size()) /
         static_cast<double>(words.size());
}

std::string JoinWords(std::span<const std::string> words) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) text.push_back(' ');
    text += words[i];
  }
  return text;
}

SegmentLabel LabelSegment(std::span<const std::string> words,
                          const TextLanguageIdentifier& text_lid,
                          const LabelingConfig& config) {
  if (static_cast<int>(words.size()) < config.min_words) {
    return {SegmentKind::kInstrumental, ""};
  }
  if (DistinctWordRatio(words) < config.repetition_threshold) {
    return {SegmentKind::kAmbiguous, ""};
  }
  const LidPrediction pred = text_lid.Predict(JoinWords(words));
  if (pred.confidence < config.confidence_threshold) {
    return {SegmentKind::kAmbiguous, ""};
  }
  return {SegmentKind::kLanguage, pred.language};
}

}  // namespace slid::corpus
