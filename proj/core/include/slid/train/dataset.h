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

#ifndef SLID_TRAIN_DATASET_H_
#define SLID_TRAIN_DATASET_H_

#include <set>
#include <span>
#include <string>
#include <vector>

#include "slid/corpus/charset.h"
#include "slid/corpus/labeling.h"
#include "slid/corpus/segmenter.h"
#include "slid/corpus/split.h"
#include "slid/corpus/types.h"
#include "slid/features/features.h"
#include "slid/nn/tensor.h"

namespace slid::train {

inline const std::string kOthersClass = "others";

// Label space. The closed set classifies among `targets`; the open set adds
// an "others" class that absorbs every other language.
struct Scenario {
  std::string kind = "closed";  // closed | open
  std::vector<std::string> targets;
  // Open set only: languages held out of training and validation entirely;
  // all their songs go to the test split.
  std::vector<std::string> out_of_domain;

  void Validate() const;
  bool open() const { return kind == "open"; }
  std::vector<std::string> ClassNames() const;
  // Class index of a song language, or -1 when the closed set has no class
  // for it.
  int ClassOf(const std::string& language) const;
  bool operator==(const Scenario&) const = default;
};

struct DatasetConfig {
  features::FeatureConfig features;
  corpus::SegmentationConfig segmentation;
  corpus::LabelingConfig labeling;
  corpus::SplitSpec split;
  Scenario scenario;
};

// One segment ready for the models.
struct Example {
  std::size_t song = 0;  // index into SplitData::songs
  corpus::Segment segment;
  int label = -1;               // LID class, -1 when masked out of the LID term
  corpus::PhonemeSeq target;    // CTC target
  features::FeatureMatrix features;  // [N, 123]
};

struct SplitData {
  std::vector<corpus::Song> songs;
  std::vector<int> song_labels;  // class per song
  std::vector<Example> examples;
};

struct Dataset {
  Scenario scenario;  // resolved: targets filled in
  std::vector<std::string> classes;
  corpus::Charset charset;
  SplitData train, val, test;
  std::vector<double> class_weights;  // from the labeled training segments
  std::set<std::string> train_languages;
  int dropped_phonemes = 0;  // validation/test codepoints absent from the charset
  std::vector<std::string> warnings;
};

// Song-level features from a feature cache or a 16 kHz wav file.
features::FeatureMatrix LoadSongFeatures(const corpus::Song& song,
                                         const features::FeatureConfig& config);

// Rows of `song_features` covering [segment.start, segment.end).
features::FeatureMatrix SliceSegment(const features::FeatureMatrix& song_features,
                                     const corpus::Segment& segment,
                                     const features::FeatureConfig& config);

// Segments of a song with their features (labels left at their default).
std::vector<Example> SegmentWithFeatures(const corpus::Song& song,
                                         const DatasetConfig& config);

// w_l = T / (L * n_l) over the labeled entries (entries < 0 are ignored).
// Throws Error(kDegenerate) when a class has no sample.
std::vector<double> ComputeClassWeights(std::span<const int> labels,
                                        int num_classes);

// Splits, segments, labels and encodes the corpus. The text identifier is
// trained on the training songs' lyrics and the charset on the training
// segments.
Dataset BuildDataset(const corpus::Corpus& corpus, const DatasetConfig& config);

// Scenario with `targets` filled from the corpus (sorted language codes,
// minus out-of-domain ones) when left empty. The open set needs explicit
// targets; leaving them empty throws Error(kConfig).
Scenario ResolveScenario(Scenario scenario, const corpus::Corpus& corpus);

nn::Tensor ToTensor(const features::FeatureMatrix& features);

}  // namespace slid::train

#endif  // SLID_TRAIN_DATASET_H_
