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

#ifndef SLID_CORPUS_LABELING_H_
#define SLID_CORPUS_LABELING_H_

#include <span>
#include <string>

#include "slid/corpus/text_lid.h"
#include "slid/corpus/types.h"

namespace slid::corpus {

struct LabelingConfig {
  int min_words = 3;
  // Segments whose distinct-word ratio falls below this are repetitive.
  double repetition_threshold = 0.3;
  // Segments whose text LID confidence falls below this are uncertain.
  double confidence_threshold = 0.5;

  void Validate() const;
};

// Distinct words / total words; 1 for an empty list.
double DistinctWordRatio(std::span<const std::string> words);

// Fewer than min_words words -> instrumental; repetitive or uncertain lyrics
// -> ambiguous; otherwise the text LID language.
SegmentLabel LabelSegment(std::span<const std::string> words,
                          const TextLanguageIdentifier& text_lid,
                          const LabelingConfig& config);

// Words joined by single spaces.
std::string JoinWords(std::span<const std::string> words);

}  // namespace slid::corpus

#endif  // SLID_CORPUS_LABELING_H_
