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

#ifndef SLID_EVAL_PREDICT_H_
#define SLID_EVAL_PREDICT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slid/model/acoustic_model.h"
#include "slid/model/language_classifier.h"
#include "slid/model/linear_classifier.h"
#include "slid/train/dataset.h"

namespace slid::eval {

inline const std::string kInstrumentalVerdict = "instrumental";

struct InferenceConfig {
  double blank_threshold = model::kDefaultBlankThreshold;
  // A segment is used only when greedy decoding of its cleaned posteriorgram
  // yields at least this many words.
  int min_decoded_words = 3;
  bool clean = true;
  bool word_filter = true;
  int workers = 1;

  void Validate() const;
  bool operator==(const InferenceConfig&) const = default;
};

struct SongPrediction {
  std::string song_id;
  int predicted = -1;          // class index, -1 for the instrumental verdict
  std::string verdict;         // class name or "instrumental"
  std::vector<double> scores;  // mean segment scores; empty when instrumental
  int usable_segments = 0;
  int total_segments = 0;

  // "song_id<TAB>verdict<TAB>score" with the winning mean score.
  std::string ToLine() const;
};

// Index of the largest value; ties go to the lowest index.
int ArgmaxLowestIndex(std::span<const double> values);

// Mean of the available segment scores and its argmax. Segments without
// scores are ignored; none at all gives the instrumental verdict.
SongPrediction AggregateSegments(
    const std::string& song_id,
    std::span<const std::optional<std::vector<double>>> segment_scores,
    const std::vector<std::string>& classes);

// Whether a (cleaned) posteriorgram decodes to enough words to be scored.
bool IsUsableSegment(const nn::Tensor& cleaned, int min_decoded_words);

// Acoustic model + recurrent classifier.
struct NeuralSystem {
  model::AcousticModel am;
  model::LanguageClassifier lid;
  std::vector<std::string> classes;
};

// Acoustic model + statistics pooling + linear classifier.
struct StatisticsSystem {
  model::AcousticModel am;
  model::LinearClassifier classifier;
  std::vector<std::string> classes;
};

// Predictions for every song of `split`, in song order.
std::vector<SongPrediction> PredictSongs(const NeuralSystem& system,
                                         const train::SplitData& split,
                                         const InferenceConfig& config);
std::vector<SongPrediction> PredictSongs(const StatisticsSystem& system,
                                         const train::SplitData& split,
                                         const InferenceConfig& config);

}  // namespace slid::eval

#endif  // SLID_EVAL_PREDICT_H_
